#include <doctest.h>

#include "oracles.hpp"

#include <numbers>

using namespace kharper;
using oracle::cd;
using std::numbers::pi;

namespace {

LatticeSpec spec_of(std::int64_t M, std::int64_t N, int Nr, int Ns, Convention c = Convention::A)
{
    return subspace_partition(planck_from_rational(M, N), Nr, Ns, c);
}

double cell_norm(const WavefunctionSamples& w)
{
    return std::real(cell_inner_product(w, w));
}

/// One-cell DFT of position weights onto the momentum points.
std::vector<cd> dft_of_cell(const WavefunctionSamples& pos, const std::vector<double>& p_points,
                            std::size_t N, double hbar)
{
    std::vector<cd> out;
    for (double p : p_points) {
        cd sum = 0.0;
        for (std::size_t t = 0; t < N; ++t)
            sum += pos.weights[t] * std::polar(1.0, -pos.points[t] * p / hbar);
        out.push_back(sum / std::sqrt(double(N)));
    }
    return out;
}

} // namespace

TEST_CASE("single kq ket is a uniform comb")
{
    const auto spec = spec_of(1, 2, 1, 2);
    const double r = 0.3, s = 0.9;
    VectorXc psi(2);
    psi << 1.0, 0.0;
    const auto pos = position_samples(spec, KQLabel{r, s}, psi, {-10.0, 10.0});
    REQUIRE(!pos.points.empty());
    for (std::size_t m = 0; m < pos.points.size(); ++m) {
        const double q = pos.points[m];
        const double n = (q - r) / spec.l;
        CHECK(std::abs(n - std::round(n)) < 1e-12);
        CHECK(std::abs(pos.weights[m] - std::polar(1.0 / std::sqrt(2.0), s * (q - r / 2) / pi)) < 1e-14);
    }
    CHECK(pos.points.front() >= -10.0);
    CHECK(pos.points.back() < 10.0);

    const auto mom = momentum_samples(spec, KQLabel{r, s}, psi, {-10.0, 10.0});
    for (double p : mom.points) {
        // p = s + k hbar + n a with k in {0, 1}.
        const double n = (p - s) / pi;
        CHECK(std::abs(n - std::round(n)) < 1e-12);
    }
    CHECK(cell_norm(pos) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cell_norm(mom) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("two-level eigenstates alternate between two magnitudes")
{
    const auto spec = spec_of(1, 2, 1, 2);
    const double r = 0.4, s = 1.1;
    const auto two = analytic_two_level(r, s, pi, pi);
    const auto pos = position_samples(spec, KQLabel{r, s}, VectorXc(two.psi_plus), {0.0, 8 * pi});
    REQUIRE(pos.points.size() == 8);
    const double even = std::abs(pos.weights[0]), odd = std::abs(pos.weights[1]);
    CHECK(std::abs(even - odd) > 1e-3);
    for (std::size_t m = 0; m < pos.points.size(); ++m) {
        CHECK(std::abs(std::abs(pos.weights[m]) - (m % 2 ? odd : even)) < 1e-12);
        if (m > 0)
            CHECK(pos.points[m] - pos.points[m - 1] == doctest::Approx(pi).epsilon(1e-13));
    }
    CHECK(even * even + odd * odd == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("position and momentum samples of block eigenstates")
{
    struct Case {
        std::int64_t M, N;
        Convention conv;
    };
    for (auto c : {Case{1, 6, Convention::A}, Case{2, 9, Convention::A}, Case{2, 9, Convention::B},
                   Case{3, 20, Convention::B}, Case{1, 12, Convention::B}})
        for (auto [Nr, Ns] : divisor_pairs(int(c.N))) {
            const auto spec = spec_of(c.M, c.N, Nr, Ns, c.conv);
            const KQLabel label{0.37 * spec.hbar(), 0.81 * spec.hbar()};
            const auto sol = eigensolve(floquet_block(spec, label, KickParams::harper(1.3, 2.2)));
            const std::size_t N = spec.dim();
            const double Lq = spec.position_period(), Lp = spec.momentum_period();
            const std::pair<double, double> qwin{-0.5 * Lq, 2.5 * Lq}, pwin{-1.5 * Lp, 1.5 * Lp};
            CAPTURE(c.M);
            CAPTURE(c.N);
            CAPTURE(Nr);

            for (int band : {0, int(N) / 2, int(N) - 1}) {
                const VectorXc psi = sol.eigenvectors.col(band);
                const auto pos = position_samples(spec, label, psi, qwin);
                const auto mom = momentum_samples(spec, label, psi, pwin);
                REQUIRE(pos.points.size() == 3 * N);
                REQUIRE(mom.points.size() == 3 * N);

                // Lattice support with the documented spacing.
                for (std::size_t m = 1; m < pos.points.size(); ++m) {
                    const double steps = (pos.points[m] - pos.points[0]) / spec.position_spacing();
                    CHECK(std::abs(steps - std::round(steps)) < 1e-9);
                    CHECK(pos.points[m] > pos.points[m - 1]);
                }
                if (c.conv == Convention::A)
                    CHECK(spec.position_spacing() == doctest::Approx(spec.hbar()).epsilon(1e-14));

                // Magnitudes repeat with the cell period.
                for (std::size_t m = 0; m + N < pos.points.size(); ++m) {
                    CHECK(pos.points[m + N] - pos.points[m] == doctest::Approx(Lq).epsilon(1e-12));
                    CHECK(std::abs(std::abs(pos.weights[m + N]) - std::abs(pos.weights[m])) < 1e-10);
                }
                for (std::size_t m = 0; m + N < mom.points.size(); ++m)
                    CHECK(std::abs(std::abs(mom.weights[m + N]) - std::abs(mom.weights[m])) < 1e-10);

                // Parseval in both bases.
                CHECK(cell_norm(pos) == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(cell_norm(mom) == doctest::Approx(1.0).epsilon(1e-12));

                // One-cell DFT maps position weights onto momentum weights.
                const auto dft = dft_of_cell(pos, mom.points, N, spec.hbar());
                double worst = 0.0;
                for (std::size_t k = 0; k < mom.points.size(); ++k)
                    worst = std::max(worst, std::abs(dft[k] - mom.weights[k]));
                CHECK(worst < 1e-10);
            }

            // Distinct eigenvectors are orthogonal as combs.
            const auto first = position_samples(spec, label, sol.eigenvectors.col(0), qwin);
            const auto last = position_samples(spec, label, sol.eigenvectors.col(N - 1), qwin);
            if (N > 1 && std::abs(sol.quasienergies[0] - sol.quasienergies[N - 1]) > 1e-6)
                CHECK(std::abs(cell_inner_product(first, last)) < 1e-9);
        }
}

TEST_CASE("position samples match the lattice oracle basis")
{
    const auto spec = spec_of(1, 6, 3, 2);
    const double r = 0.2, s = 0.5;
    const MatrixXc B = oracle::kq_position_basis(spec, r, s);
    const auto pts = oracle::position_cell(spec, r);
    auto gen = oracle::rng(1);
    std::normal_distribution<double> g;
    VectorXc psi(6);
    for (auto& x : psi)
        x = cd(g(gen), g(gen));
    psi.normalize();
    const VectorXc expected = B * psi;
    const auto pos = position_samples(spec, KQLabel{r, s}, psi, {r - 1e-9, r + spec.position_period() - 1e-9});
    REQUIRE(pos.points.size() == 6);
    for (int t = 0; t < 6; ++t) {
        const auto it = std::find_if(pos.points.begin(), pos.points.end(),
                                     [&](double q) { return std::abs(q - pts[t].q) < 1e-12; });
        REQUIRE(it != pos.points.end());
        CHECK(std::abs(pos.weights[it - pos.points.begin()] - expected(t)) < 1e-13);
    }
}

TEST_CASE("orderings give identical samples")
{
    const auto spec = spec_of(1, 6, 2, 3);
    const KQLabel label{0.1, 0.4};
    const auto kick = KickParams::harper(2, 1);
    const auto a = eigensolve(floquet_block(spec, label, kick, Ordering::XPXQ));
    const VectorXc v = a.eigenvectors.col(2);
    const VectorXc w = swap_matrix(spec) * v;
    const auto pa = position_samples(spec, label, v, {0.0, 10.0}, Ordering::XPXQ);
    const auto pb = position_samples(spec, label, w, {0.0, 10.0}, Ordering::PXQX);
    REQUIRE(pa.points == pb.points);
    for (std::size_t m = 0; m < pa.points.size(); ++m)
        CHECK(std::abs(pa.weights[m] - pb.weights[m]) < 1e-15);
}

TEST_CASE("window semantics and input errors")
{
    const auto spec = spec_of(1, 2, 1, 2);
    VectorXc psi(2);
    psi << 0.0, 1.0;
    // Points at 0, pi, 2 pi: the left edge is included, the right excluded.
    const auto pos = position_samples(spec, KQLabel{0.0, 0.0}, psi, {0.0, 2 * pi});
    REQUIRE(pos.points.size() == 2);
    CHECK(pos.points.front() == 0.0);
    CHECK(pos.window.first == 0.0);
    CHECK(pos.basis == Basis::position);

    CHECK_THROWS_AS(position_samples(spec, KQLabel{}, psi, {1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(position_samples(spec, KQLabel{}, psi, {2.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(momentum_samples(spec, KQLabel{}, psi, {0.0, INFINITY}), InvalidArgument);
    CHECK_THROWS_AS(position_samples(spec, KQLabel{}, VectorXc::Ones(3), {0.0, 1.0}), InvalidArgument);
}
