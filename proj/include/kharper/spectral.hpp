#pragma once

#include "kharper/floquet.hpp"
#include "kharper/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <type_traits>
#include <vector>

namespace kharper {

namespace detail {

struct GeneralEigenResult {
    VectorXc values;
    MatrixXc vectors; // empty unless requested
    int info = 0;
};

/// Dense complex general eigendecomposition through LAPACK zgeev.
GeneralEigenResult lapack_general_eigen(const MatrixXc& A, bool compute_vectors);

template <class Real>
struct GeneralEigen {
    CVector<Real> values;
    CMatrix<Real> vectors;
};

template <class Real>
GeneralEigen<Real> general_eigen(const CMatrix<Real>& A, bool compute_vectors,
                                 const std::string& context)
{
    if constexpr (std::is_same_v<Real, double>) {
        auto res = lapack_general_eigen(A, compute_vectors);
        if (res.info != 0)
            throw NumericalError("eigensolver did not converge (zgeev info=" +
                                 std::to_string(res.info) + ") for " + context);
        return {std::move(res.values), std::move(res.vectors)};
    } else {
        Eigen::ComplexEigenSolver<CMatrix<Real>> solver(A, compute_vectors);
        if (solver.info() != Eigen::Success)
            throw NumericalError("eigensolver did not converge for " + context);
        GeneralEigen<Real> out{solver.eigenvalues(), {}};
        if (compute_vectors)
            out.vectors = solver.eigenvectors();
        return out;
    }
}

template <class Real>
std::string describe(const FloquetBlock<Real>& block)
{
    std::ostringstream os;
    os.precision(17);
    os << "block(M=" << block.spec.planck.M << ", N=" << block.spec.planck.N
       << ", Nr=" << block.spec.Nr << ", Ns=" << block.spec.Ns << ", r=" << block.label.r
       << ", s=" << block.label.s << ")";
    return os.str();
}

/// Principal argument mapped onto (-pi, pi].
template <class Real>
Real quasienergy(const std::complex<Real>& lambda)
{
    Real w = std::arg(lambda);
    if (w <= -std::numbers::pi_v<Real>)
        w += 2 * std::numbers::pi_v<Real>;
    return w;
}

} // namespace detail

struct EigensolveOptions {
    /// Eigenvalues with ||lambda| - 1| above this raise UnitarityError.
    double unitarity_tolerance = 1e-8;
    /// Quasi-energies closer than this (on the circle) form a degenerate
    /// cluster whose eigenvectors are re-orthonormalized together.
    double cluster_tolerance = 1e-8;
};

template <class Real = double>
struct EigenSolution {
    KQLabel label;
    Ordering ordering = Ordering::XPXQ;
    std::vector<Real> quasienergies; // ascending in (-pi, pi]
    CMatrix<Real> eigenvectors;      // column n belongs to quasienergies[n]
    std::vector<Real> residuals;     // ||U psi - e^{i omega} psi||_2

    Real max_residual() const
    {
        return residuals.empty() ? Real(0) : *std::max_element(residuals.begin(), residuals.end());
    }
};

/// Sorted quasi-energies only (no eigenvectors). Same validation as eigensolve.
template <class Real = double>
std::vector<Real> quasienergies(const FloquetBlock<Real>& block, const EigensolveOptions& opt = {})
{
    const auto eig = detail::general_eigen<Real>(block.matrix, false, detail::describe(block));
    std::vector<Real> omega(eig.values.size());
    for (Eigen::Index n = 0; n < eig.values.size(); ++n) {
        if (std::abs(std::abs(eig.values(n)) - Real(1)) > Real(opt.unitarity_tolerance))
            throw UnitarityError("eigenvalue modulus " + std::to_string(double(std::abs(eig.values(n)))) +
                                 " off the unit circle for " + detail::describe(block));
        omega[n] = detail::quasienergy(eig.values(n));
    }
    std::sort(omega.begin(), omega.end());
    return omega;
}

/// Full eigendecomposition U psi = e^{i omega} psi of a Floquet block.
///
/// The solver is a general (non-Hermitian) dense one; unitarity is only
/// checked. Columns inside a cluster of near-equal quasi-energies are
/// re-orthonormalized by modified Gram-Schmidt in sorted order.
template <class Real = double>
EigenSolution<Real> eigensolve(const FloquetBlock<Real>& block, const EigensolveOptions& opt = {})
{
    using Complex = std::complex<Real>;
    const std::string context = detail::describe(block);
    const auto eig = detail::general_eigen<Real>(block.matrix, true, context);
    const Eigen::Index N = eig.values.size();

    std::vector<Real> omega(N);
    for (Eigen::Index n = 0; n < N; ++n) {
        if (std::abs(std::abs(eig.values(n)) - Real(1)) > Real(opt.unitarity_tolerance))
            throw UnitarityError("eigenvalue modulus " + std::to_string(double(std::abs(eig.values(n)))) +
                                 " off the unit circle for " + context);
        omega[n] = detail::quasienergy(eig.values(n));
    }
    std::vector<Eigen::Index> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return omega[x] < omega[y]; });

    EigenSolution<Real> sol;
    sol.label = block.label;
    sol.ordering = block.ordering;
    sol.quasienergies.resize(N);
    sol.eigenvectors.resize(N, N);
    for (Eigen::Index n = 0; n < N; ++n) {
        sol.quasienergies[n] = omega[order[n]];
        sol.eigenvectors.col(n) = eig.vectors.col(order[n]).normalized();
    }

    // Cluster boundaries on the circle; a cluster may wrap from +pi to -pi.
    const Real tol = Real(opt.cluster_tolerance);
    const Real tau = 2 * std::numbers::pi_v<Real>;
    std::vector<Eigen::Index> cluster_of(N, 0);
    Eigen::Index clusters = 0;
    for (Eigen::Index n = 1; n < N; ++n) {
        if (sol.quasienergies[n] - sol.quasienergies[n - 1] >= tol)
            ++clusters;
        cluster_of[n] = clusters;
    }
    if (N > 1 && clusters > 0 && sol.quasienergies[0] + tau - sol.quasienergies[N - 1] < tol)
        for (Eigen::Index n = N - 1; n >= 0 && cluster_of[n] == clusters; --n)
            cluster_of[n] = 0;
    for (Eigen::Index c = 0; c <= clusters; ++c) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index n = 0; n < N; ++n)
            if (cluster_of[n] == c)
                members.push_back(n);
        if (members.size() < 2)
            continue;
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto v = sol.eigenvectors.col(members[i]);
            for (std::size_t k = 0; k < i; ++k) {
                const auto u = sol.eigenvectors.col(members[k]);
                const Complex proj = u.dot(v);
                v -= proj * u;
            }
            const Real norm = v.norm();
            if (norm < Real(1e-6))
                throw NumericalError("degenerate eigenvectors are linearly dependent for " + context);
            v /= norm;
        }
    }

    sol.residuals.resize(N);
    const CMatrix<Real> UV = block.matrix * sol.eigenvectors;
    for (Eigen::Index n = 0; n < N; ++n) {
        const Complex phase = detail::unit_phase(sol.quasienergies[n]);
        sol.residuals[n] = (UV.col(n) - phase * sol.eigenvectors.col(n)).norm();
    }
    return sol;
}

/// Closed-form eigensolution of the 2x2 block at hbar = pi, partition
/// (Nr, Ns) = (1, 2), XPXQ ordering.
struct TwoLevelSolution {
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    Eigen::Vector2cd psi_plus;
    Eigen::Vector2cd psi_minus;
    /// Set when cos^2(Lbar) cos^2(Kbar) is within tolerance of 1; the two
    /// quasi-energies coincide and the eigenvector basis is arbitrary.
    bool degenerate = false;
};

/// With Lbar = (L/pi) cos s, Kbar = (K/pi) cos r, c = cos Lbar cos Kbar:
///   e^{i omega_pm} = c +- i sqrt(1 - c^2)
///   psi_pm ~ (e^{-i Lbar} sin Kbar theta, -sin Lbar cos Kbar -+ sqrt(1 - c^2)),
///   theta = e^{i r/2}.
TwoLevelSolution analytic_two_level(double r, double s, double K, double L,
                                    double degeneracy_tolerance = 1e-8);

/// The closed-form 2x2 matrix U(r,s) at hbar = pi.
Eigen::Matrix2cd analytic_two_level_matrix(double r, double s, double K, double L);

/// Quasi-energy bands over a uniform grid r_i = i hbar / nr, s_j = j hbar / ns.
struct BandSurface {
    LatticeSpec spec;
    KickParams kick;
    std::vector<double> r_grid;
    std::vector<double> s_grid;
    std::vector<double> bands; // [r_index][s_index][band] flattened

    std::size_t dim() const { return static_cast<std::size_t>(spec.dim()); }
    double at(std::size_t ri, std::size_t si, std::size_t band) const
    {
        return bands[(ri * s_grid.size() + si) * dim() + band];
    }
    /// max - min of one band over the grid.
    double band_width(std::size_t band) const;
};

BandSurface band_surface(const LatticeSpec& spec, const KickParams& kick, int r_samples,
                         int s_samples, int threads = 1,
                         Ordering ordering = Ordering::XPXQ);

/// Bottleneck distance between two multisets of quasi-energies on the unit
/// circle: min over cyclic alignments of the sorted lists of
/// max |e^{i a_n} - e^{i b_{n+c}}|. Inputs need not be sorted.
double spectral_distance(std::vector<double> a, std::vector<double> b);

/// max_k |u_k - e^{i phi} v_k| with phi = arg <v, u>, i.e. the entrywise
/// distance between two unit vectors after removing a global phase.
double phase_aligned_distance(const VectorXc& u, const VectorXc& v);

} // namespace kharper
