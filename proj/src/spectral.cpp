#include "kharper/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace kharper {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

} // namespace

Eigen::Matrix2cd analytic_two_level_matrix(double r, double s, double K, double L)
{
    const double hbar = std::numbers::pi;
    const double Lbar = L / hbar * std::cos(s);
    const double Kbar = K / hbar * std::cos(r);
    const cd theta = std::polar(1.0, r / 2.0);
    const cd em = std::polar(1.0, -Lbar), ep = std::polar(1.0, Lbar);
    Eigen::Matrix2cd U;
    U << em * std::cos(Kbar), -I * em * std::sin(Kbar) * theta,
         -I * ep * std::sin(Kbar) * std::conj(theta), ep * std::cos(Kbar);
    return U;
}

TwoLevelSolution analytic_two_level(double r, double s, double K, double L,
                                    double degeneracy_tolerance)
{
    const double hbar = std::numbers::pi;
    const double Lbar = L / hbar * std::cos(s);
    const double Kbar = K / hbar * std::cos(r);
    const cd theta = std::polar(1.0, r / 2.0);
    const double c = std::cos(Lbar) * std::cos(Kbar);
    const double root = std::sqrt(std::max(0.0, 1.0 - c * c));

    TwoLevelSolution out;
    out.omega_plus = std::atan2(root, c);
    out.omega_minus = -out.omega_plus;
    if (out.omega_minus <= -std::numbers::pi)
        out.omega_minus += 2.0 * std::numbers::pi;
    out.degenerate = root <= degeneracy_tolerance;

    const cd em = std::polar(1.0, -Lbar), ep = std::polar(1.0, Lbar);
    // Null vectors of U - lambda from the first row (the closed form) and
    // from the second row; the longer one is the better conditioned.
    auto eigvec = [&](double sign) -> Eigen::Vector2cd {
        const cd lambda{c, sign * root};
        Eigen::Vector2cd first(em * std::sin(Kbar) * theta,
                               -std::sin(Lbar) * std::cos(Kbar) - sign * root);
        Eigen::Vector2cd second(ep * std::cos(Kbar) - lambda,
                                I * ep * std::sin(Kbar) * std::conj(theta));
        const double n1 = first.norm(), n2 = second.norm();
        if (std::max(n1, n2) > 1e-12)
            return n1 >= n2 ? Eigen::Vector2cd(first / n1) : Eigen::Vector2cd(second / n2);
        // U is a multiple of the identity; any basis works.
        return sign > 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    };
    out.psi_plus = eigvec(+1.0);
    out.psi_minus = eigvec(-1.0);
    if (out.degenerate) {
        // Keep the pair orthonormal inside the degenerate plane.
        out.psi_minus -= out.psi_plus.dot(out.psi_minus) * out.psi_plus;
        if (out.psi_minus.norm() < 1e-8)
            out.psi_minus = Eigen::Vector2cd(-std::conj(out.psi_plus(1)), std::conj(out.psi_plus(0)));
        out.psi_minus.normalize();
    }
    return out;
}

double BandSurface::band_width(std::size_t band) const
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t ri = 0; ri < r_grid.size(); ++ri)
        for (std::size_t si = 0; si < s_grid.size(); ++si) {
            const double w = at(ri, si, band);
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
    return hi - lo;
}

BandSurface band_surface(const LatticeSpec& spec, const KickParams& kick, int r_samples,
                         int s_samples, int threads, Ordering ordering)
{
    if (r_samples < 1 || s_samples < 1)
        throw InvalidArgument("band grid needs at least one sample per axis");
    BandSurface out;
    out.spec = spec;
    out.kick = kick;
    const double hbar = spec.hbar();
    for (int i = 0; i < r_samples; ++i)
        out.r_grid.push_back(hbar * i / r_samples);
    for (int j = 0; j < s_samples; ++j)
        out.s_grid.push_back(hbar * j / s_samples);
    const std::size_t N = out.dim();
    const std::size_t points = out.r_grid.size() * out.s_grid.size();
    out.bands.assign(points * N, 0.0);

    parallel_for(points, threads, [&](std::size_t idx) {
        const std::size_t ri = idx / out.s_grid.size(), si = idx % out.s_grid.size();
        const KQLabel label{out.r_grid[ri], out.s_grid[si]};
        try {
            const auto block = floquet_block(spec, label, kick, ordering);
            const auto omega = quasienergies(block);
            std::copy(omega.begin(), omega.end(), out.bands.begin() + idx * N);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " at grid point (" + std::to_string(ri) +
                                 ", " + std::to_string(si) + ")");
        }
    });
    return out;
}

double spectral_distance(std::vector<double> a, std::vector<double> b)
{
    if (a.size() != b.size())
        return std::numeric_limits<double>::infinity();
    if (a.empty())
        return 0.0;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size();
    std::vector<cd> za(n), zb(n);
    for (std::size_t i = 0; i < n; ++i) {
        za[i] = std::polar(1.0, a[i]);
        zb[i] = std::polar(1.0, b[i]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t shift = 0; shift < n; ++shift) {
        double worst = 0.0;
        for (std::size_t i = 0; i < n && worst < best; ++i)
            worst = std::max(worst, std::abs(za[i] - zb[(i + shift) % n]));
        best = std::min(best, worst);
    }
    return best;
}

double phase_aligned_distance(const VectorXc& u, const VectorXc& v)
{
    const cd overlap = v.dot(u);
    const cd phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd{1.0, 0.0};
    return (u - phase * v).cwiseAbs().maxCoeff();
}

} // namespace kharper
