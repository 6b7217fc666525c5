#include <doctest.h>

#include "oracles.hpp"

#include <numbers>
#include <set>

using namespace kharper;
using oracle::cd;
using oracle::max_abs_diff;
using std::numbers::pi;

namespace {

LatticeSpec spec_of(std::int64_t M, std::int64_t N, int Nr, int Ns, Convention c = Convention::A)
{
    return subspace_partition(planck_from_rational(M, N), Nr, Ns, c);
}

struct Draw {
    double r, s, K, L;
};

Draw random_draw(std::mt19937_64& gen, double hbar)
{
    std::uniform_real_distribution<double> cell(0.0, hbar), strength(-12.0, 12.0);
    return {cell(gen), cell(gen), strength(gen), strength(gen)};
}

} // namespace

TEST_CASE("fourier_matrix small cases")
{
    const MatrixXc F2 = fourier_matrix(2, 0.0, 0.0, -pi);
    MatrixXc H(2, 2);
    H << 1, 1, 1, -1;
    H /= std::sqrt(2.0);
    CHECK(max_abs_diff(F2, H) < 1e-15);

    const MatrixXc F1 = fourier_matrix(1, 0.7, -1.3, 0.4);
    CHECK(std::abs(F1(0, 0) - std::polar(1.0, 0.4 * 0.7 * -1.3)) < 1e-15);

    const MatrixXc F4 = fourier_matrix(4, 0.25, 0.5, -pi / 2);
    CHECK(max_abs_diff(F4 * F4.adjoint(), MatrixXc::Identity(4, 4)) < 1e-13);

    CHECK_THROWS_AS(fourier_matrix(0, 0.0, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("fourier_matrix is unitary for every comb phase that occurs")
{
    for (std::int64_t M = 1; M <= 4; ++M)
        for (int dim = 1; dim <= 16; ++dim) {
            if (std::gcd<std::int64_t>(M, dim) != 1)
                continue;
            const MatrixXc F = fourier_matrix(dim, 0.31, -0.77, -2 * pi * double(M) / dim);
            CHECK(max_abs_diff(F * F.adjoint(), MatrixXc::Identity(dim, dim)) < 1e-12 * dim);
        }
}

TEST_CASE("kick and kinetic blocks: trivial cases")
{
    const auto spec = spec_of(1, 6, 2, 3);
    const KQLabel label{0.2, 0.9};
    const MatrixXc Q0 = kick_block_Q(spec, label, KickParams::harper(0.0, 1.0));
    CHECK(max_abs_diff(Q0, MatrixXc::Identity(3, 3)) < 1e-14);
    const MatrixXc P0 = free_block_P(spec, label, KickParams::harper(1.0, 0.0));
    CHECK(max_abs_diff(P0, MatrixXc::Identity(2, 2)) < 1e-14);

    const auto column = spec_of(1, 5, 5, 1);
    const double K = 1.7, r = 0.4;
    const MatrixXc Q1 = kick_block_Q(column, KQLabel{r, 0.3}, KickParams::harper(K, 0.0));
    REQUIRE(Q1.rows() == 1);
    CHECK(std::abs(Q1(0, 0) - std::polar(1.0, -K * std::cos(r) / column.hbar())) < 1e-14);

    const auto row = spec_of(1, 5, 1, 5);
    const double L = -2.1, s = 0.8;
    const MatrixXc P1 = free_block_P(row, KQLabel{0.1, s}, KickParams::harper(0.0, L));
    REQUIRE(P1.rows() == 1);
    CHECK(std::abs(P1(0, 0) - std::polar(1.0, -L * std::cos(s) / row.hbar())) < 1e-14);
}

TEST_CASE("kick block matches the finite-sum oracle")
{
    const auto spec = spec_of(1, 2, 1, 2);
    const auto kick = KickParams::harper(pi, 0.0);
    const MatrixXc Q = kick_block_Q(spec, KQLabel{0.3, 0.7}, kick);
    CHECK(max_abs_diff(Q, oracle::kick_block_sum(spec, 0.3, 0.7, kick.V)) < 1e-12);

    auto gen = oracle::rng(11);
    for (auto [M, N] : {std::pair{1, 6}, {2, 9}, {3, 10}})
        for (auto [Nr, Ns] : divisor_pairs(N))
            for (auto conv : {Convention::A, Convention::B}) {
                const auto sp = spec_of(M, N, Nr, Ns, conv);
                const auto d = random_draw(gen, sp.hbar());
                const auto k = KickParams::harper(d.K, d.L);
                CHECK(max_abs_diff(kick_block_Q(sp, KQLabel{d.r, d.s}, k),
                                   oracle::kick_block_sum(sp, d.r, d.s, k.V)) < 1e-12);
                CHECK(max_abs_diff(free_block_P(sp, KQLabel{d.r, d.s}, k),
                                   oracle::free_block_sum(sp, d.r, d.s, k.W)) < 1e-12);
            }
}

TEST_CASE("kinetic block matches the finite-sum oracle at hbar = pi")
{
    const auto spec = spec_of(1, 2, 2, 1);
    const auto kick = KickParams::harper(0.0, 2.3);
    const MatrixXc P = free_block_P(spec, KQLabel{1.1, 0.4}, kick);
    CHECK(max_abs_diff(P, oracle::free_block_sum(spec, 1.1, 0.4, kick.W)) < 1e-12);
}

TEST_CASE("block-diagonal assembly")
{
    const auto spec = spec_of(1, 4, 2, 2);
    const auto kick = KickParams::harper(1.3, -0.6);
    const KQLabel label{0.5, 1.2};
    const double hbar = spec.hbar();

    const MatrixXc BQ = block_diag_Q(spec, label, kick);
    CHECK(max_abs_diff(BQ.block(0, 0, 2, 2), kick_block_Q(spec, label, kick)) < 1e-14);
    CHECK(max_abs_diff(BQ.block(2, 2, 2, 2), kick_block_Q(spec, KQLabel{label.r + hbar, label.s}, kick)) < 1e-14);
    CHECK(BQ.block(0, 2, 2, 2).cwiseAbs().maxCoeff() == 0.0);

    const MatrixXc BP = block_diag_P(spec, label, kick);
    CHECK(max_abs_diff(BP.block(0, 0, 2, 2), free_block_P(spec, label, kick)) < 1e-14);
    CHECK(max_abs_diff(BP.block(2, 2, 2, 2), free_block_P(spec, KQLabel{label.r, label.s + hbar}, kick)) < 1e-14);
    CHECK(BP.block(2, 0, 2, 2).cwiseAbs().maxCoeff() == 0.0);

    const auto column = spec_of(1, 4, 1, 4);
    CHECK(max_abs_diff(block_diag_Q(column, label, kick), kick_block_Q(column, label, kick)) < 1e-15);
    const auto row = spec_of(1, 4, 4, 1);
    CHECK(max_abs_diff(block_diag_P(row, label, kick), free_block_P(row, label, kick)) < 1e-15);

    const auto none = KickParams::harper(0.0, 0.0);
    CHECK(max_abs_diff(block_diag_Q(spec, label, none), MatrixXc::Identity(4, 4)) < 1e-14);
    CHECK(max_abs_diff(block_diag_P(spec, label, none), MatrixXc::Identity(4, 4)) < 1e-14);
    CHECK(unitarity_error(BQ) < 1e-13);
    CHECK(unitarity_error(BP) < 1e-13);
}

TEST_CASE("swap matrix column pattern")
{
    const Permutation X22 = swap_matrix(2, 2, 4);
    const Eigen::MatrixXi dense = X22.toDenseMatrix();
    // Column c has its one at row pattern[c] (0-based of 1, 3, 2, 4).
    const int pattern[4] = {0, 2, 1, 3};
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r)
            CHECK(dense(r, c) == (r == pattern[c] ? 1 : 0));

    for (int N : {1, 2, 5, 9}) {
        CHECK(swap_matrix(1, N, N).toDenseMatrix() == Eigen::MatrixXi::Identity(N, N));
        CHECK(swap_matrix(N, 1, N).toDenseMatrix() == Eigen::MatrixXi::Identity(N, N));
    }
    CHECK_THROWS_AS(swap_matrix(2, 3, 7), InvalidArgument);
}

TEST_CASE("swap matrices are permutations for every factorization of N <= 24")
{
    for (int N = 1; N <= 24; ++N)
        for (auto [j, k] : divisor_pairs(N)) {
            const Eigen::MatrixXi X = swap_matrix(j, k, N).toDenseMatrix();
            CHECK(X * X.transpose() == Eigen::MatrixXi::Identity(N, N));
            CHECK(X.rowwise().sum() == Eigen::VectorXi::Ones(N));
            CHECK(X.colwise().sum() == Eigen::RowVectorXi::Ones(N));
            CHECK(X.cwiseAbs().maxCoeff() == 1);
            // X(j,k)^T = X(k,j)
            CHECK(X.transpose() == swap_matrix(k, j, N).toDenseMatrix());
        }
}

TEST_CASE("floquet_block at hbar = pi reproduces the closed form")
{
    const auto spec = spec_of(1, 2, 1, 2);
    const double r = 0.4, s = 1.1;
    const auto U = floquet_block(spec, KQLabel{r, s}, KickParams::harper(pi, pi));
    CHECK(max_abs_diff(U.matrix, analytic_two_level_matrix(r, s, pi, pi)) < 1e-12);

    auto gen = oracle::rng(3);
    for (int t = 0; t < 50; ++t) {
        const auto d = random_draw(gen, pi);
        const auto B = floquet_block(spec, KQLabel{d.r, d.s}, KickParams::harper(d.K, d.L));
        CHECK(max_abs_diff(B.matrix, analytic_two_level_matrix(d.r, d.s, d.K, d.L)) < 1e-12);
        CHECK(std::abs(B.matrix.determinant() - cd(1.0)) < 1e-12);
    }
}

TEST_CASE("zero kick gives the identity")
{
    for (auto [Nr, Ns] : divisor_pairs(6)) {
        const auto spec = spec_of(1, 6, Nr, Ns);
        for (auto ord : {Ordering::XPXQ, Ordering::PXQX}) {
            const auto U = floquet_block(spec, KQLabel{0.3, 0.2}, KickParams::harper(0, 0), ord);
            CHECK(max_abs_diff(U.matrix, MatrixXc::Identity(6, 6)) < 1e-13);
        }
        CHECK(max_abs_diff(floquet_block_direct(spec, KQLabel{0.3, 0.2}, KickParams::harper(0, 0)),
                           MatrixXc::Identity(6, 6)) < 1e-13);
    }
}

TEST_CASE("fast and direct constructions agree, and both match the lattice picture")
{
    auto gen = oracle::rng(42);
    const std::vector<std::pair<int, int>> planck{{1, 2}, {1, 4}, {1, 5}, {1, 6}, {2, 5}, {3, 8}, {5, 12}};
    for (auto [M, N] : planck)
        for (auto [Nr, Ns] : divisor_pairs(N))
            for (auto conv : {Convention::A, Convention::B}) {
                const auto spec = spec_of(M, N, Nr, Ns, conv);
                for (int t = 0; t < 5; ++t) {
                    const auto d = random_draw(gen, spec.hbar());
                    const auto kick = KickParams::harper(d.K, d.L);
                    const KQLabel label{d.r, d.s};
                    const MatrixXc fast = floquet_block(spec, label, kick).matrix;
                    const MatrixXc direct = floquet_block_direct(spec, label, kick);
                    CAPTURE(M);
                    CAPTURE(N);
                    CAPTURE(Nr);
                    CHECK(max_abs_diff(fast, direct) < 1e-10);
                    CHECK(max_abs_diff(fast, oracle::lattice_floquet(spec, d.r, d.s, kick)) < 1e-10);
                    CHECK(unitarity_error(fast) < 1e-12);
                }
            }
}

TEST_CASE("general periodic potentials")
{
    const PeriodicFunction V{{0.3, 1.1, 0.0, -0.4}, {0.0, 0.5, 0.8}};
    const PeriodicFunction W{{0.0, 0.0, 0.9}, {0.0, -1.2}};
    const KickParams kick{V, W};
    CHECK_NOTHROW(validate_periodic(V, "V"));
    for (auto [Nr, Ns] : divisor_pairs(10)) {
        const auto spec = spec_of(3, 10, Nr, Ns);
        const KQLabel label{0.71, 0.13};
        CHECK(max_abs_diff(floquet_block(spec, label, kick).matrix,
                           oracle::lattice_floquet(spec, label.r, label.s, kick)) < 1e-10);
    }
}

TEST_CASE("single-comb case collapses to F^dagger D(W) F D(V)")
{
    const auto spec = spec_of(1, 7, 7, 1);
    const double r = 0.37, s = 0.52, K = 2.2, L = 1.4;
    const double hbar = spec.hbar(), a = spec.a;
    const MatrixXc F = fourier_matrix(7, s / (2 * a), r / hbar, -a);
    VectorXc dw(7), dv(7);
    for (int n = 0; n < 7; ++n) {
        dw(n) = std::polar(1.0, -L * std::cos(s + n * a) / hbar);
        dv(n) = std::polar(1.0, -K * std::cos(r + n * hbar) / hbar);
    }
    const MatrixXc expected = F.adjoint() * dw.asDiagonal() * F * dv.asDiagonal();
    const auto U = floquet_block(spec, KQLabel{r, s}, KickParams::harper(K, L));
    CHECK(max_abs_diff(U.matrix, expected) < 1e-12);
}

TEST_CASE("orderings are permutation-similar")
{
    const auto kick = KickParams::harper(1.9, 2.7);
    for (auto [Nr, Ns] : divisor_pairs(6)) {
        const auto spec = spec_of(1, 6, Nr, Ns);
        const KQLabel label{0.61, 0.27};
        const auto A = floquet_block(spec, label, kick, Ordering::XPXQ);
        const auto B = floquet_block(spec, label, kick, Ordering::PXQX);
        CHECK(max_abs_diff(reorder(A.matrix, spec, Ordering::XPXQ, Ordering::PXQX), B.matrix) < 1e-12);
        CHECK(max_abs_diff(reorder(B.matrix, spec, Ordering::PXQX, Ordering::XPXQ), A.matrix) < 1e-12);
        CHECK(spectral_distance(oracle::eigen_quasienergies(A.matrix),
                                oracle::eigen_quasienergies(B.matrix)) < 1e-10);
    }
}

TEST_CASE("comb normalizations multiply to one")
{
    for (auto [M, N] : {std::pair{1, 2}, {1, 6}, {3, 7}, {233, 1775}})
        for (auto [Nr, Ns] : divisor_pairs(N))
            for (auto conv : {Convention::A, Convention::B}) {
                const auto spec = spec_of(M, N, Nr, Ns, conv);
                const auto [Cq, Cp] = comb_normalization(spec);
                CHECK(std::abs(Cq * Cq * Cp * Cp - 1.0) < 1e-14);
            }
}

TEST_CASE("unitarity holds at larger N")
{
    const auto spec = spec_of(1, 400, 400, 1);
    const auto U = floquet_block(spec, KQLabel{0.003, 0.011}, KickParams::harper(2.0, 2.0));
    CHECK(unitarity_error(U.matrix) < 1e-10);
    const auto split = spec_of(7, 120, 8, 15, Convention::B);
    CHECK(unitarity_error(floquet_block(split, KQLabel{0.1, 0.2}, KickParams::harper(5.0, -3.0)).matrix) < 1e-10);
}

TEST_CASE("long double path agrees with double")
{
    const auto spec = spec_of(2, 9, 3, 3, Convention::B);
    const auto kick = KickParams::harper(3.3, 1.7);
    const KQLabel label{0.2, 0.5};
    const auto hi = floquet_block<long double>(spec, label, kick);
    const auto lo = floquet_block<double>(spec, label, kick);
    CHECK(max_abs_diff(hi.matrix.cast<cd>(), lo.matrix) < 1e-13);
    CHECK(unitarity_error(hi.matrix) < 1e-17L);
    const CMatrix<long double> direct = floquet_block_direct<long double>(spec, label, kick);
    CHECK((hi.matrix - direct).cwiseAbs().maxCoeff() < 1e-16L);
}

TEST_CASE("validate_periodic rejects a non-periodic descriptor")
{
    // Fourier series are periodic by construction; only non-finite
    // coefficients can break the check.
    PeriodicFunction bad{{std::numeric_limits<double>::infinity()}, {}};
    CHECK_THROWS_AS(validate_periodic(bad, "V"), InvalidArgument);
}
