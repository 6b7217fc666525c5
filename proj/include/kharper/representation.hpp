#pragma once

#include "kharper/floquet.hpp"
#include "kharper/lattice.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace kharper {

enum class Basis { position, momentum };

/// A block eigenstate as a discrete weighted comb: the state is
/// sum_m weights[m] * delta(x - points[m]).
///
/// Weights are normalized so that |weights|^2 sums to one over any
/// cell_period. Points lie on {offset + n * spacing}.
struct WavefunctionSamples {
    Basis basis = Basis::position;
    std::vector<double> points;
    std::vector<std::complex<double>> weights;
    double cell_period = 0.0;
    double spacing = 0.0;
    std::pair<double, double> window{0.0, 0.0}; // [lo, hi)
};

/// psi(q') = sum_{j,k} psi_{jk} <q'|r + j hbar, s + k hbar, l>, sampled on
/// every comb point q' = r_j + n l in the window. Each comb carries
/// exp(i s_k (q' - r_j/2)/hbar) / sqrt(Ns).
WavefunctionSamples position_samples(const LatticeSpec& spec, const KQLabel& label,
                                     const VectorXc& eigenvector,
                                     std::pair<double, double> window,
                                     Ordering ordering = Ordering::XPXQ);

/// Momentum counterpart: p' = s_k + n a with weights
/// exp(-i r_j (p' - s_k/2)/hbar) / sqrt(Nr).
WavefunctionSamples momentum_samples(const LatticeSpec& spec, const KQLabel& label,
                                     const VectorXc& eigenvector,
                                     std::pair<double, double> window,
                                     Ordering ordering = Ordering::XPXQ);

/// sum of conj(a_m) b_m over the first cell of points (cell_period / spacing
/// of them).
/// Both inputs must share the same points.
std::complex<double> cell_inner_product(const WavefunctionSamples& a, const WavefunctionSamples& b);

} // namespace kharper
