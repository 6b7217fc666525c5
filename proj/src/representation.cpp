#include "kharper/representation.hpp"

#include "kharper/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kharper {

namespace {

using cd = std::complex<double>;

struct CombPoint {
    double x;
    cd w;
};

// Shared enumeration: `outer` indexes the comb offsets c_i = base + i*hbar,
// `inner` the phase labels d_t = other + t*hbar. The comb through c_i has
// spacing `period`, and a point x on it gets
//   norm * sum_t coeff(i, t) * exp(i * sign * d_t * (x - c_i/2) / hbar).
template <class Coeff>
std::vector<CombPoint> enumerate(int outer, int inner, double base, double other, double period,
                                 double hbar, double sign, std::pair<double, double> window,
                                 Coeff coeff)
{
    const auto [lo, hi] = window;
    const double norm = 1.0 / std::sqrt(static_cast<double>(inner));
    std::vector<CombPoint> pts;
    for (int i = 0; i < outer; ++i) {
        const double ci = base + i * hbar;
        const auto n_first = static_cast<long long>(std::floor((lo - ci) / period)) - 1;
        const auto n_last = static_cast<long long>(std::ceil((hi - ci) / period)) + 1;
        for (long long n = n_first; n <= n_last; ++n) {
            const double x = ci + static_cast<double>(n) * period;
            if (x < lo || x >= hi)
                continue;
            cd w = 0.0;
            for (int t = 0; t < inner; ++t) {
                const double dt = other + t * hbar;
                w += coeff(i, t) * std::polar(1.0, sign * dt * (x - ci / 2.0) / hbar);
            }
            pts.push_back({x, norm * w});
        }
    }
    std::sort(pts.begin(), pts.end(), [](const CombPoint& u, const CombPoint& v) { return u.x < v.x; });
    return pts;
}

void check_inputs(const LatticeSpec& spec, const VectorXc& v, std::pair<double, double> window)
{
    if (v.size() != spec.dim())
        throw InvalidArgument("eigenvector length " + std::to_string(v.size()) +
                              " does not match block dimension " + std::to_string(spec.dim()));
    if (!std::isfinite(window.first) || !std::isfinite(window.second))
        throw InvalidArgument("sample window must be finite");
    if (!(window.second > window.first))
        throw InvalidArgument("sample window is empty");
}

cd component(const LatticeSpec& spec, const VectorXc& v, Ordering ordering, int j, int k)
{
    return ordering == Ordering::XPXQ ? v(j * spec.Ns + k) : v(k * spec.Nr + j);
}

WavefunctionSamples pack(Basis basis, std::vector<CombPoint> pts, double period, double spacing,
                         std::pair<double, double> window)
{
    WavefunctionSamples out;
    out.basis = basis;
    out.cell_period = period;
    out.spacing = spacing;
    out.window = window;
    out.points.reserve(pts.size());
    out.weights.reserve(pts.size());
    for (const auto& p : pts) {
        out.points.push_back(p.x);
        out.weights.push_back(p.w);
    }
    return out;
}

} // namespace

WavefunctionSamples position_samples(const LatticeSpec& spec, const KQLabel& label,
                                     const VectorXc& eigenvector, std::pair<double, double> window,
                                     Ordering ordering)
{
    check_inputs(spec, eigenvector, window);
    auto pts = enumerate(spec.Nr, spec.Ns, label.r, label.s, spec.l, spec.hbar(), +1.0, window,
                         [&](int j, int k) { return component(spec, eigenvector, ordering, j, k); });
    return pack(Basis::position, std::move(pts), spec.position_period(), spec.position_spacing(),
                window);
}

WavefunctionSamples momentum_samples(const LatticeSpec& spec, const KQLabel& label,
                                     const VectorXc& eigenvector, std::pair<double, double> window,
                                     Ordering ordering)
{
    check_inputs(spec, eigenvector, window);
    auto pts = enumerate(spec.Ns, spec.Nr, label.s, label.r, spec.a, spec.hbar(), -1.0, window,
                         [&](int k, int j) { return component(spec, eigenvector, ordering, j, k); });
    return pack(Basis::momentum, std::move(pts), spec.momentum_period(), spec.momentum_spacing(),
                window);
}

std::complex<double> cell_inner_product(const WavefunctionSamples& a, const WavefunctionSamples& b)
{
    if (a.points.size() != b.points.size())
        throw InvalidArgument("cell inner product needs samples on the same points");
    const auto per_cell = static_cast<std::size_t>(std::llround(a.cell_period / a.spacing));
    if (a.points.size() < per_cell)
        throw InvalidArgument("sample window is shorter than one cell");
    cd sum = 0.0;
    for (std::size_t m = 0; m < per_cell; ++m)
        sum += std::conj(a.weights[m]) * b.weights[m];
    return sum;
}

} // namespace kharper
