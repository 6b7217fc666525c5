#include "kharper/classical.hpp"

#include "kharper/error.hpp"
#include "kharper/lattice.hpp"
#include "kharper/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace kharper {

PhaseSpacePoint harper_map(PhaseSpacePoint x, double K, double L)
{
    const double p = x.p + K * std::sin(x.q);
    return {x.q - L * std::sin(p), p};
}

PhaseSpacePoint harper_map_inverse(PhaseSpacePoint x, double K, double L)
{
    const double q = x.q + L * std::sin(x.p);
    return {q, x.p - K * std::sin(q)};
}

double energy_of(PhaseSpacePoint x)
{
    return 0.5 * (x.q * x.q + x.p * x.p);
}

PhaseSpacePoint fold_to_torus(PhaseSpacePoint x)
{
    auto fold = [](double v) {
        double y = std::fmod(v, two_pi);
        if (y < 0.0)
            y += two_pi;
        return y >= two_pi ? 0.0 : y;
    };
    return {fold(x.q), fold(x.p)};
}

std::vector<PhaseSpacePoint> poincare_section(const std::vector<PhaseSpacePoint>& seeds, double K,
                                              double L, int n_iter, bool fold, int threads)
{
    if (n_iter < 1)
        throw InvalidArgument("n_iter must be at least 1");
    const auto n = static_cast<std::size_t>(n_iter);
    std::vector<PhaseSpacePoint> out(seeds.size() * n);
    parallel_for(seeds.size(), threads, [&](std::size_t i) {
        PhaseSpacePoint x = seeds[i];
        for (std::size_t t = 0; t < n; ++t) {
            x = harper_map(x, K, L);
            out[i * n + t] = fold ? fold_to_torus(x) : x;
        }
    });
    return out;
}

std::size_t AcceleratorMask::count() const
{
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), char{1}));
}

AcceleratorMask accelerator_scan(const std::vector<double>& q_axis, const std::vector<double>& p_axis,
                                 double K, double L, int n_iter, double energy_threshold, int threads)
{
    if (q_axis.empty() || p_axis.empty())
        throw InvalidArgument("accelerator scan axes must be non-empty");
    if (n_iter < 0)
        throw InvalidArgument("n_iter must be non-negative");
    AcceleratorMask mask;
    mask.q_axis = q_axis;
    mask.p_axis = p_axis;
    mask.n_iterations = n_iter;
    mask.energy_threshold = energy_threshold;
    mask.flags.assign(q_axis.size() * p_axis.size(), 0);
    parallel_for(q_axis.size(), threads, [&](std::size_t iq) {
        for (std::size_t ip = 0; ip < p_axis.size(); ++ip) {
            PhaseSpacePoint x{q_axis[iq], p_axis[ip]};
            for (int t = 0; t < n_iter; ++t)
                x = harper_map(x, K, L);
            mask.flags[iq * p_axis.size() + ip] = energy_of(x) > energy_threshold ? 1 : 0;
        }
    });
    return mask;
}

std::optional<int> stability_window(double K)
{
    if (!(K > 0.0) || !std::isfinite(K))
        return std::nullopt;
    // Windows are disjoint and narrower than 2 pi; only n near K / 2 pi can match.
    const int centre = static_cast<int>(std::floor(K / two_pi));
    for (int n = std::max(1, centre - 1); n <= centre + 1; ++n) {
        const double lower = two_pi * n;
        if (lower < K && K < std::sqrt(lower * lower + 4.0))
            return n;
    }
    return std::nullopt;
}

} // namespace kharper
