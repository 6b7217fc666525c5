#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kharper {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Effective Planck constant hbar = 2*pi*M/N with M/N in lowest terms.
struct PlanckParam {
    std::int64_t M = 1;
    std::int64_t N = 1;
    double hbar = two_pi;
};

/// Reduces M/N to lowest terms. Throws InvalidArgument for M < 1 or N < 1.
PlanckParam planck_from_rational(std::int64_t M, std::int64_t N);

/// The two comb-spacing choices for a partition N = N_r * N_s.
///   A: (l, a) = (2 pi M / N_s, 2 pi / N_r)
///   B: (l, a) = (2 pi / N_s,   2 pi M / N_r)
enum class Convention { A, B };

/// A subspace partition: comb spacings and block dimensions.
///
/// Basis kets of a block are |r + j hbar, s + k hbar, l> with
/// j in [0, Nr) and k in [0, Ns). Eigenstates built on a block repeat in
/// position with period Ns*l and in momentum with period Nr*a; both lattices
/// carry exactly N points per period.
struct LatticeSpec {
    PlanckParam planck;
    int Nr = 1;
    int Ns = 1;
    Convention convention = Convention::A;
    double l = two_pi;
    double a = two_pi;

    int dim() const { return Nr * Ns; }
    double hbar() const { return planck.hbar; }
    double position_period() const { return Ns * l; }
    double momentum_period() const { return Nr * a; }
    double position_spacing() const { return position_period() / dim(); }
    double momentum_spacing() const { return momentum_period() / dim(); }
};

/// Throws PartitionError unless Nr * Ns == planck.N.
LatticeSpec subspace_partition(const PlanckParam& planck, int Nr, int Ns,
                               Convention convention = Convention::A);

/// All ordered pairs (Nr, Ns) with Nr * Ns == N, Nr ascending.
std::vector<std::pair<int, int>> divisor_pairs(int N);

/// Subspace label (quasi-position r, quasi-momentum s) in [0, hbar)^2.
struct KQLabel {
    double r = 0.0;
    double s = 0.0;
    /// Set when make_label had to reduce an input modulo hbar.
    bool wrapped = false;
};

/// Builds a label, reducing r and s modulo hbar into the fundamental cell.
KQLabel make_label(const PlanckParam& planck, double r, double s);

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// First `count` convergents of [a0; a1, a2, ...], starting from the first
/// non-trivial one h1/k1 (the integer part a0/1 is skipped). Fewer are
/// returned when the expansion terminates early.
std::vector<Rational> convergents(std::span<const std::int64_t> coefficients,
                                  std::size_t count);

/// Continued-fraction coefficients [0; 7, 1, 1, ...] of 1/(6 + golden mean).
std::vector<std::int64_t> golden_sixth_coefficients(std::size_t length);

/// 1/(6 + (sqrt(5)+1)/2) in long double.
long double golden_sixth_value();

/// Named continued fractions accepted by the CLI ("golden-sixth", "golden").
std::vector<std::int64_t> named_coefficients(const std::string& name,
                                             std::size_t length);

} // namespace kharper
