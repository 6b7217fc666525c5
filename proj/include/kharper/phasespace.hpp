#pragma once

#include "kharper/representation.hpp"

#include <Eigen/Core>

#include <vector>

namespace kharper {

/// Husimi distribution sampled on a q x p grid; values(iq, ip).
struct HusimiGrid {
    std::vector<double> q_axis;
    std::vector<double> p_axis;
    Eigen::MatrixXd values;
    double hbar = 0.0;
    /// Trapezoid-rule integral of values over the grid's extent.
    double normalization = 0.0;
};

/// Default Gaussian cut-off, in units of sigma = sqrt(hbar/2). The amplitude
/// falls to exp(-36) there.
inline constexpr double default_husimi_truncation = 12.0;

/// H(q0, p0) = spacing/(2 pi hbar) * |sum_m conj(g(q_m)) w_m|^2 with the
/// coherent state g(q) = (2 pi sigma^2)^{-1/4} exp(-(q - q0)^2 / (4 sigma^2) + i p0 q / hbar),
/// sigma = sqrt(hbar/2). The sum runs over comb points within
/// truncation_radius * sigma of q0. With cell-normalized weights the
/// integral of H over one translation cell of the state is 1.
///
/// Throws WrongBasisError for momentum samples and InsufficientSupportError
/// when the state's window does not cover the q axis plus the cut-off margin.
HusimiGrid husimi(const WavefunctionSamples& state, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, double hbar,
                  double truncation_radius = default_husimi_truncation, int threads = 1);

/// Trapezoid rule over a (possibly non-uniform) 2-D grid.
double trapezoid_2d(const std::vector<double>& x, const std::vector<double>& y,
                    const Eigen::MatrixXd& f);

/// n points from lo to hi; hi is included when `inclusive`.
std::vector<double> linspace(double lo, double hi, int n, bool inclusive = true);

} // namespace kharper
