#include "kharper/phasespace.hpp"

#include "kharper/error.hpp"
#include "kharper/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace kharper {

std::vector<double> linspace(double lo, double hi, int n, bool inclusive)
{
    if (n < 1)
        throw InvalidArgument("grid needs at least one point");
    std::vector<double> out(n);
    const int intervals = inclusive ? std::max(n - 1, 1) : n;
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * i / intervals;
    return out;
}

double trapezoid_2d(const std::vector<double>& x, const std::vector<double>& y,
                    const Eigen::MatrixXd& f)
{
    auto weights = [](const std::vector<double>& axis) {
        std::vector<double> w(axis.size(), 0.0);
        for (std::size_t i = 0; i + 1 < axis.size(); ++i) {
            const double h = axis[i + 1] - axis[i];
            w[i] += h / 2.0;
            w[i + 1] += h / 2.0;
        }
        return w;
    };
    const auto wx = weights(x), wy = weights(y);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            sum += wx[i] * wy[j] * f(i, j);
    return sum;
}

HusimiGrid husimi(const WavefunctionSamples& state, const std::vector<double>& q_axis,
                  const std::vector<double>& p_axis, double hbar, double truncation_radius,
                  int threads)
{
    if (state.basis != Basis::position)
        throw WrongBasisError("Husimi distribution needs position-basis samples");
    if (!(truncation_radius > 0.0))
        throw InvalidArgument("truncation_radius must be positive");
    if (!(hbar > 0.0))
        throw InvalidArgument("hbar must be positive");
    if (q_axis.empty() || p_axis.empty())
        throw InvalidArgument("Husimi axes must be non-empty");

    const double sigma = std::sqrt(hbar / 2.0);
    const double reach = truncation_radius * sigma;
    const auto [qmin, qmax] = std::minmax_element(q_axis.begin(), q_axis.end());
    if (state.window.first > *qmin - reach || state.window.second <= *qmax + reach)
        throw InsufficientSupportError(
            "state window [" + std::to_string(state.window.first) + ", " +
            std::to_string(state.window.second) + ") does not cover the q axis [" +
            std::to_string(*qmin) + ", " + std::to_string(*qmax) + "] plus a margin of " +
            std::to_string(reach));

    const double amplitude = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    const double prefactor = state.spacing / (2.0 * std::numbers::pi * hbar);

    HusimiGrid out;
    out.q_axis = q_axis;
    out.p_axis = p_axis;
    out.hbar = hbar;
    out.values.resize(static_cast<Eigen::Index>(q_axis.size()), static_cast<Eigen::Index>(p_axis.size()));

    parallel_for(q_axis.size(), threads, [&](std::size_t iq) {
        const double q0 = q_axis[iq];
        const auto first = std::lower_bound(state.points.begin(), state.points.end(), q0 - reach);
        const auto last = std::upper_bound(first, state.points.end(), q0 + reach);
        const auto begin = static_cast<std::size_t>(first - state.points.begin());
        const auto end = static_cast<std::size_t>(last - state.points.begin());

        std::vector<std::complex<double>> coeff;
        coeff.reserve(end - begin);
        for (std::size_t m = begin; m < end; ++m) {
            const double dq = state.points[m] - q0;
            coeff.push_back(amplitude * std::exp(-dq * dq / (4.0 * sigma * sigma)) * state.weights[m]);
        }
        for (std::size_t ip = 0; ip < p_axis.size(); ++ip) {
            std::complex<double> sum = 0.0;
            for (std::size_t m = begin; m < end; ++m)
                sum += coeff[m - begin] * std::polar(1.0, -p_axis[ip] * state.points[m] / hbar);
            out.values(static_cast<Eigen::Index>(iq), static_cast<Eigen::Index>(ip)) =
                prefactor * std::norm(sum);
        }
    });
    out.normalization = trapezoid_2d(out.q_axis, out.p_axis, out.values);
    return out;
}

} // namespace kharper
