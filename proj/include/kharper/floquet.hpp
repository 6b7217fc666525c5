#pragma once

// Block-reduced Floquet operator U(r,s) of the kicked Harper model.
//
// All builders are templated on the real scalar so that the same code runs in
// double (default) and long double. Block kets are |r + j hbar, s + k hbar, l>
// with j in [0, Nr), k in [0, Ns). Two index orderings are used:
//   XPXQ: index j*Ns + k (k fastest), the ordering of the block-diagonal kick
//   PXQX: index k*Nr + j (j fastest), the ordering of the block-diagonal
//         kinetic factor

#include "kharper/error.hpp"
#include "kharper/lattice.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace kharper {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
using MatrixXc = CMatrix<double>;
using VectorXc = CVector<double>;
using Permutation = Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int>;

/// Finite Fourier series f(x) = sum_k cos_terms[k] cos(kx) + sin_terms[k] sin(kx).
/// Periodicity in 2*pi is structural.
struct PeriodicFunction {
    std::vector<double> cos_terms;
    std::vector<double> sin_terms;

    static PeriodicFunction cosine(double amplitude) { return {{0.0, amplitude}, {}}; }

    template <class Real>
    Real operator()(Real x) const
    {
        Real sum = 0;
        for (std::size_t k = 0; k < cos_terms.size(); ++k)
            if (cos_terms[k] != 0.0)
                sum += Real(cos_terms[k]) * std::cos(Real(k) * x);
        for (std::size_t k = 1; k < sin_terms.size(); ++k)
            if (sin_terms[k] != 0.0)
                sum += Real(sin_terms[k]) * std::sin(Real(k) * x);
        return sum;
    }
};

/// Kick potential V(q) and kinetic term W(p).
struct KickParams {
    PeriodicFunction V;
    PeriodicFunction W;

    /// V = K cos q, W = L cos p.
    static KickParams harper(double K, double L)
    {
        return {PeriodicFunction::cosine(K), PeriodicFunction::cosine(L)};
    }
};

/// Checks |f(x + 2 pi) - f(x)| < 1e-12 at 64 sample points.
inline void validate_periodic(const PeriodicFunction& f, const std::string& name)
{
    for (int i = 0; i < 64; ++i) {
        const double x = -10.0 + 20.0 * i / 63.0;
        if (!std::isfinite(f(x)))
            throw InvalidArgument(name + " is not finite at x=" + std::to_string(x));
        if (std::abs(f(x + two_pi) - f(x)) >= 1e-12 * (1.0 + std::abs(f(x))))
            throw InvalidArgument(name + " is not 2*pi periodic");
    }
}

enum class Ordering { XPXQ, PXQX };

namespace detail {

/// hbar, l, a recomputed from the integers in the working precision.
template <class Real>
struct Geometry {
    Real hbar, l, a;
    explicit Geometry(const LatticeSpec& spec)
    {
        const Real tau = 2 * std::numbers::pi_v<Real>;
        const Real M = Real(spec.planck.M);
        hbar = tau * M / Real(spec.planck.N);
        if (spec.convention == Convention::A) {
            l = tau * M / Real(spec.Ns);
            a = tau / Real(spec.Nr);
        } else {
            l = tau / Real(spec.Ns);
            a = tau * M / Real(spec.Nr);
        }
    }
};

template <class Real>
std::complex<Real> unit_phase(Real angle)
{
    return {std::cos(angle), std::sin(angle)};
}

} // namespace detail

/// F_{jk} = exp(i * phase_angle * (j + a_shift)(k + b_shift)) / sqrt(dim).
///
/// The 1/sqrt(dim) is a global prefactor; only the pure phase is raised to
/// the power (j+a)(k+b). F is unitary whenever phase_angle*dim is 2*pi times
/// an integer coprime to dim.
template <class Real = double>
CMatrix<Real> fourier_matrix(int dim, Real a_shift, Real b_shift, Real phase_angle)
{
    if (dim < 1)
        throw InvalidArgument("Fourier matrix dimension must be >= 1, got " + std::to_string(dim));
    const Real norm = Real(1) / std::sqrt(Real(dim));
    CMatrix<Real> F(dim, dim);
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j)
            F(j, k) = norm * detail::unit_phase(phase_angle * ((Real(j) + a_shift) * (Real(k) + b_shift)));
    return F;
}

/// Continuum normalizations C_q = sqrt(l / sqrt(2 pi hbar)) and
/// C_p = sqrt(a / sqrt(2 pi hbar)) of the kq combs. The orthonormalized block
/// matrices absorb them; only C_q^2 C_p^2 = 1 survives in U.
inline std::pair<double, double> comb_normalization(const LatticeSpec& spec)
{
    const double root = std::sqrt(two_pi * spec.hbar());
    return {std::sqrt(spec.l / root), std::sqrt(spec.a / root)};
}

namespace detail {

template <class Real>
CMatrix<Real> kick_block(const LatticeSpec& spec, const Geometry<Real>& g, Real r, Real s,
                         const KickParams& kick)
{
    const CMatrix<Real> F = fourier_matrix<Real>(spec.Ns, s / g.hbar, r / (2 * g.l), -g.l);
    CVector<Real> D(spec.Ns);
    for (int n = 0; n < spec.Ns; ++n)
        D(n) = unit_phase<Real>(-kick.V(r + Real(n) * g.l) / g.hbar);
    return F * D.asDiagonal() * F.adjoint();
}

template <class Real>
CMatrix<Real> free_block(const LatticeSpec& spec, const Geometry<Real>& g, Real r, Real s,
                         const KickParams& kick)
{
    const CMatrix<Real> F = fourier_matrix<Real>(spec.Nr, s / (2 * g.a), r / g.hbar, -g.a);
    CVector<Real> D(spec.Nr);
    for (int n = 0; n < spec.Nr; ++n)
        D(n) = unit_phase<Real>(-kick.W(s + Real(n) * g.a) / g.hbar);
    return F.adjoint() * D.asDiagonal() * F;
}

} // namespace detail

/// Kick factor Q(r,s) = F D(V) F^dagger on the Ns kets |r, s + k hbar, l>,
/// with F = F(s/hbar, r/2l) at phase -l and D(V)_nn = exp(-i V(r + n l)/hbar).
template <class Real = double>
CMatrix<Real> kick_block_Q(const LatticeSpec& spec, const KQLabel& label, const KickParams& kick)
{
    return detail::kick_block<Real>(spec, detail::Geometry<Real>(spec), Real(label.r),
                                    Real(label.s), kick);
}

/// Kinetic factor P(r,s) = F^dagger D(W) F on the Nr kets |r + j hbar, s, l>,
/// with F = F(s/2a, r/hbar) at phase -a and D(W)_nn = exp(-i W(s + n a)/hbar).
template <class Real = double>
CMatrix<Real> free_block_P(const LatticeSpec& spec, const KQLabel& label, const KickParams& kick)
{
    return detail::free_block<Real>(spec, detail::Geometry<Real>(spec), Real(label.r),
                                    Real(label.s), kick);
}

/// diag(Q(r_0,s), ..., Q(r_{Nr-1},s)) with r_n = r + n hbar, XPXQ ordering.
template <class Real = double>
CMatrix<Real> block_diag_Q(const LatticeSpec& spec, const KQLabel& label, const KickParams& kick)
{
    const detail::Geometry<Real> g(spec);
    const int Ns = spec.Ns;
    CMatrix<Real> out = CMatrix<Real>::Zero(spec.dim(), spec.dim());
    for (int n = 0; n < spec.Nr; ++n) {
        out.block(n * Ns, n * Ns, Ns, Ns) =
            detail::kick_block<Real>(spec, g, Real(label.r) + Real(n) * g.hbar, Real(label.s), kick);
    }
    return out;
}

/// diag(P(r,s_0), ..., P(r,s_{Ns-1})) with s_n = s + n hbar, PXQX ordering.
template <class Real = double>
CMatrix<Real> block_diag_P(const LatticeSpec& spec, const KQLabel& label, const KickParams& kick)
{
    const detail::Geometry<Real> g(spec);
    const int Nr = spec.Nr;
    CMatrix<Real> out = CMatrix<Real>::Zero(spec.dim(), spec.dim());
    for (int n = 0; n < spec.Ns; ++n) {
        out.block(n * Nr, n * Nr, Nr, Nr) =
            detail::free_block<Real>(spec, g, Real(label.r), Real(label.s) + Real(n) * g.hbar, kick);
    }
    return out;
}

/// Swap matrix X(j,k) of size n = j*k. Its columns, in order, are the unit
/// vectors e_1, e_{1+j}, ..., e_{1+(k-1)j}, e_2, e_{2+j}, ... (1-based), i.e.
/// column c (0-based) is e_{c/k + (c%k)*j}. X(Nr,Ns) maps the XPXQ index
/// j*Ns + k to the PXQX index k*Nr + j.
inline Permutation swap_matrix(int j, int k, int n)
{
    if (j < 1 || k < 1 || static_cast<long long>(j) * k != n)
        throw InvalidArgument("swap matrix needs j*k == N, got " + std::to_string(j) + "*" +
                              std::to_string(k) + " != " + std::to_string(n));
    Permutation X(n);
    for (int c = 0; c < n; ++c)
        X.indices()(c) = c / k + (c % k) * j;
    return X;
}

inline Permutation swap_matrix(const LatticeSpec& spec)
{
    return swap_matrix(spec.Nr, spec.Ns, spec.dim());
}

template <class Real = double>
struct FloquetBlock {
    LatticeSpec spec;
    KQLabel label;
    KickParams kick;
    Ordering ordering = Ordering::XPXQ;
    CMatrix<Real> matrix;
};

/// Assembles U(r,s) = X^T P X Q (XPXQ) or U(r,s) = P X Q X^T (PXQX).
/// Block-diagonal factors are applied block by block.
template <class Real = double>
FloquetBlock<Real> floquet_block(const LatticeSpec& spec, const KQLabel& label,
                                 const KickParams& kick, Ordering ordering = Ordering::XPXQ)
{
    const detail::Geometry<Real> g(spec);
    const int N = spec.dim(), Nr = spec.Nr, Ns = spec.Ns;
    const Permutation X = swap_matrix(spec);

    FloquetBlock<Real> block{spec, label, kick, ordering, CMatrix<Real>(N, N)};
    if (ordering == Ordering::XPXQ) {
        const CMatrix<Real> Pp = X.transpose() * block_diag_P<Real>(spec, label, kick) * X;
        for (int n = 0; n < Nr; ++n) {
            const Real rn = Real(label.r) + Real(n) * g.hbar;
            block.matrix.middleCols(n * Ns, Ns).noalias() =
                Pp.middleCols(n * Ns, Ns) * detail::kick_block<Real>(spec, g, rn, Real(label.s), kick);
        }
    } else {
        const CMatrix<Real> Qp = X * block_diag_Q<Real>(spec, label, kick) * X.transpose();
        for (int n = 0; n < Ns; ++n) {
            const Real sn = Real(label.s) + Real(n) * g.hbar;
            block.matrix.middleRows(n * Nr, Nr).noalias() =
                detail::free_block<Real>(spec, g, Real(label.r), sn, kick) * Qp.middleRows(n * Nr, Nr);
        }
    }
    return block;
}

/// Reference construction of U(r,s) in XPXQ ordering from explicit finite
/// sums over one period of each comb, with no Fourier or swap matrices:
///
///   Q[(j,k),(j,k')] = 1/Ns sum_n e^{i (s_k' - s_k)(r_j/2 + n l)/hbar} e^{-i V(r_j + n l)/hbar}
///   P[(j,k),(j',k)] = 1/Nr sum_n e^{i (r_j - r_j')(s_k/2 + n a)/hbar} e^{-i W(s_k + n a)/hbar}
///
/// O(N^3); meant as an oracle for N up to a few hundred.
template <class Real = double>
CMatrix<Real> floquet_block_direct(const LatticeSpec& spec, const KQLabel& label,
                                   const KickParams& kick)
{
    const detail::Geometry<Real> g(spec);
    const int N = spec.dim(), Nr = spec.Nr, Ns = spec.Ns;
    const Real r = Real(label.r), s = Real(label.s);

    CMatrix<Real> Q = CMatrix<Real>::Zero(N, N);
    for (int j = 0; j < Nr; ++j) {
        const Real rj = r + Real(j) * g.hbar;
        for (int k = 0; k < Ns; ++k) {
            const Real sk = s + Real(k) * g.hbar;
            for (int kp = 0; kp < Ns; ++kp) {
                const Real skp = s + Real(kp) * g.hbar;
                std::complex<Real> sum = 0;
                for (int n = 0; n < Ns; ++n) {
                    const Real x = rj / 2 + Real(n) * g.l;
                    const Real q = rj + Real(n) * g.l;
                    sum += detail::unit_phase<Real>((skp - sk) * x / g.hbar - kick.V(q) / g.hbar);
                }
                Q(j * Ns + k, j * Ns + kp) = sum / Real(Ns);
            }
        }
    }

    CMatrix<Real> P = CMatrix<Real>::Zero(N, N);
    for (int k = 0; k < Ns; ++k) {
        const Real sk = s + Real(k) * g.hbar;
        for (int j = 0; j < Nr; ++j) {
            const Real rj = r + Real(j) * g.hbar;
            for (int jp = 0; jp < Nr; ++jp) {
                const Real rjp = r + Real(jp) * g.hbar;
                std::complex<Real> sum = 0;
                for (int n = 0; n < Nr; ++n) {
                    const Real x = sk / 2 + Real(n) * g.a;
                    const Real p = sk + Real(n) * g.a;
                    sum += detail::unit_phase<Real>((rj - rjp) * x / g.hbar - kick.W(p) / g.hbar);
                }
                P(j * Ns + k, jp * Ns + k) = sum / Real(Nr);
            }
        }
    }
    return P * Q;
}

/// max |U^dagger U - I|.
template <class Derived>
typename Derived::RealScalar unitarity_error(const Eigen::MatrixBase<Derived>& U)
{
    using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix G = U.adjoint() * U - Matrix::Identity(U.cols(), U.cols());
    return G.cwiseAbs().maxCoeff();
}

/// Converts a matrix between the XPXQ and PXQX index orderings.
template <class Real>
CMatrix<Real> reorder(const CMatrix<Real>& U, const LatticeSpec& spec, Ordering from, Ordering to)
{
    if (from == to)
        return U;
    const Permutation X = swap_matrix(spec);
    if (from == Ordering::XPXQ)
        return X * U * X.transpose();
    return X.transpose() * U * X;
}

} // namespace kharper
