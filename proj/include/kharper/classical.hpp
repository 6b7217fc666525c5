#pragma once

#include <optional>
#include <vector>

namespace kharper {

struct PhaseSpacePoint {
    double q = 0.0;
    double p = 0.0;
};

/// One period of the classical kicked Harper map: kick, then free rotation.
///   p' = p + K sin q
///   q' = q - L sin p'
PhaseSpacePoint harper_map(PhaseSpacePoint x, double K, double L);

/// Exact inverse of harper_map.
PhaseSpacePoint harper_map_inverse(PhaseSpacePoint x, double K, double L);

/// E = (q^2 + p^2) / 2.
double energy_of(PhaseSpacePoint x);

/// Reduces both coordinates into [0, 2 pi).
PhaseSpacePoint fold_to_torus(PhaseSpacePoint x);

/// Every iterate of every seed, seed-major (seed 0 iterates 1..n, then seed 1 ...).
std::vector<PhaseSpacePoint> poincare_section(const std::vector<PhaseSpacePoint>& seeds, double K,
                                              double L, int n_iter, bool fold, int threads = 1);

struct AcceleratorMask {
    std::vector<double> q_axis;
    std::vector<double> p_axis;
    std::vector<char> flags; // [q_index][p_index] flattened
    int n_iterations = 0;
    double energy_threshold = 0.0;

    bool at(std::size_t iq, std::size_t ip) const { return flags[iq * p_axis.size() + ip] != 0; }
    std::size_t count() const;
};

/// Flags grid initial conditions whose energy after n_iter map steps
/// exceeds energy_threshold.
AcceleratorMask accelerator_scan(const std::vector<double>& q_axis, const std::vector<double>& p_axis,
                                 double K, double L, int n_iter = 800,
                                 double energy_threshold = 3500.0, int threads = 1);

/// Smallest n >= 1 with 2 n pi < K < sqrt((2 n pi)^2 + 4), if any. Valid for K = L.
std::optional<int> stability_window(double K);

} // namespace kharper
