#include "kharper/lattice.hpp"

#include "kharper/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace kharper {

PlanckParam planck_from_rational(std::int64_t M, std::int64_t N)
{
    if (M < 1)
        throw InvalidArgument("M must be a positive integer, got " + std::to_string(M));
    if (N < 1)
        throw InvalidArgument("N must be a positive integer, got " + std::to_string(N));
    const std::int64_t g = std::gcd(M, N);
    PlanckParam p;
    p.M = M / g;
    p.N = N / g;
    p.hbar = two_pi * static_cast<double>(p.M) / static_cast<double>(p.N);
    return p;
}

LatticeSpec subspace_partition(const PlanckParam& planck, int Nr, int Ns,
                               Convention convention)
{
    if (Nr < 1 || Ns < 1)
        throw PartitionError("partition sizes must be positive, got Nr=" + std::to_string(Nr) +
                             " Ns=" + std::to_string(Ns));
    const std::int64_t product = static_cast<std::int64_t>(Nr) * Ns;
    if (product != planck.N)
        throw PartitionError("Nr*Ns = " + std::to_string(Nr) + "*" + std::to_string(Ns) + " = " +
                             std::to_string(product) + " does not equal N = " +
                             std::to_string(planck.N));
    LatticeSpec spec;
    spec.planck = planck;
    spec.Nr = Nr;
    spec.Ns = Ns;
    spec.convention = convention;
    const double M = static_cast<double>(planck.M);
    if (convention == Convention::A) {
        spec.l = two_pi * M / Ns;
        spec.a = two_pi / Nr;
    } else {
        spec.l = two_pi / Ns;
        spec.a = two_pi * M / Nr;
    }
    return spec;
}

std::vector<std::pair<int, int>> divisor_pairs(int N)
{
    std::vector<std::pair<int, int>> out;
    for (int d = 1; d <= N; ++d)
        if (N % d == 0)
            out.emplace_back(d, N / d);
    return out;
}

namespace {

double reduce(double x, double period, bool& wrapped)
{
    if (x >= 0.0 && x < period)
        return x;
    wrapped = true;
    double y = std::fmod(x, period);
    if (y < 0.0)
        y += period;
    if (y >= period)
        y = 0.0;
    return y;
}

} // namespace

KQLabel make_label(const PlanckParam& planck, double r, double s)
{
    if (!std::isfinite(r) || !std::isfinite(s))
        throw InvalidArgument("label coordinates must be finite");
    KQLabel label;
    label.r = reduce(r, planck.hbar, label.wrapped);
    label.s = reduce(s, planck.hbar, label.wrapped);
    return label;
}

std::vector<Rational> convergents(std::span<const std::int64_t> coefficients,
                                  std::size_t count)
{
    if (coefficients.empty())
        throw InvalidArgument("continued fraction needs at least one coefficient");
    if (count < 1)
        throw InvalidArgument("convergent count must be at least 1");

    // h_k = a_k h_{k-1} + h_{k-2}, k_k likewise, seeded with (1,0) and (0,1).
    std::int64_t h_prev = 1, h = coefficients[0];
    std::int64_t k_prev = 0, k = 1;
    std::vector<Rational> out;
    for (std::size_t i = 1; i < coefficients.size() && out.size() < count; ++i) {
        const std::int64_t ai = coefficients[i];
        if (ai < 1)
            throw InvalidArgument("continued-fraction coefficients after a0 must be positive");
        const std::int64_t h_next = ai * h + h_prev;
        const std::int64_t k_next = ai * k + k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        const std::int64_t g = std::gcd(h, k);
        out.push_back({h / g, k / g});
    }
    return out;
}

std::vector<std::int64_t> golden_sixth_coefficients(std::size_t length)
{
    std::vector<std::int64_t> cf;
    cf.reserve(length);
    for (std::size_t i = 0; i < length; ++i)
        cf.push_back(i == 0 ? 0 : (i == 1 ? 7 : 1));
    return cf;
}

long double golden_sixth_value()
{
    const long double golden = (std::sqrt(5.0L) + 1.0L) / 2.0L;
    return 1.0L / (6.0L + golden);
}

std::vector<std::int64_t> named_coefficients(const std::string& name, std::size_t length)
{
    if (name == "golden-sixth")
        return golden_sixth_coefficients(length);
    if (name == "golden") {
        // 1/golden = [0; 1, 1, 1, ...]
        std::vector<std::int64_t> cf(length, 1);
        if (!cf.empty())
            cf[0] = 0;
        return cf;
    }
    throw InvalidArgument("unknown named number '" + name + "'");
}

} // namespace kharper
