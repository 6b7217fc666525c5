#include "kharper/run.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>

namespace kharper::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

class VerificationFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

std::string fixed(double v, int digits = 2)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string destination(const std::string& path)
{
    return path.empty() ? "stdout" : path;
}

void emit(const JobConfig& c, std::ostream& data_out, const std::string& path, Format fallback,
          const json& meta, const Table& table)
{
    const Format fmt = resolve_format(c.format, path, fallback);
    const std::string text = fmt == Format::json ? render_json(meta, table) : render_csv(meta, table);
    if (path.empty())
        data_out << text;
    else
        write_atomic(path, text);
}

std::string partition_text(const LatticeSpec& spec)
{
    return std::to_string(spec.Nr) + "x" + std::to_string(spec.Ns) +
           (spec.convention == Convention::A ? " A" : " B");
}

KQLabel label_of(const JobConfig& c, const PlanckParam& planck, json& meta)
{
    const KQLabel label = make_label(planck, c.r.value, c.s.value);
    if (label.wrapped) {
        meta["r_reduced"] = label.r;
        meta["s_reduced"] = label.s;
    }
    return label;
}

struct SelectedState {
    LatticeSpec spec;
    KQLabel label;
    double omega = 0.0;
    double residual = 0.0;
    VectorXc psi;
};

SelectedState select_state(const JobConfig& c, json& meta)
{
    SelectedState st;
    st.spec = lattice_of(c);
    st.label = label_of(c, st.spec.planck, meta);
    const auto sol = eigensolve(floquet_block(st.spec, st.label, kick_of(c), c.ordering));
    st.omega = sol.quasienergies[c.band];
    st.residual = sol.residuals[c.band];
    st.psi = sol.eigenvectors.col(c.band);
    meta["result"] = {{"quasienergy", st.omega}, {"residual", st.residual}};
    return st;
}

std::string run_bands(const JobConfig& c, std::ostream& data_out)
{
    const auto t0 = Clock::now();
    const auto spec = lattice_of(c);
    const auto surf = band_surface(spec, kick_of(c), c.grid_x, c.grid_y, resolve_threads(c.threads),
                                   c.ordering);
    std::vector<int> selection = c.band_selection;
    if (selection.empty())
        for (int b = 0; b < spec.dim(); ++b)
            selection.push_back(b);

    Table table{{"r", "s", "band_index", "omega"}, {}};
    table.rows.reserve(surf.r_grid.size() * surf.s_grid.size() * selection.size());
    for (std::size_t i = 0; i < surf.r_grid.size(); ++i)
        for (std::size_t j = 0; j < surf.s_grid.size(); ++j)
            for (int b : selection)
                table.add({surf.r_grid[i], surf.s_grid[j], std::int64_t(b), surf.at(i, j, b)});
    emit(c, data_out, c.output, Format::csv, config_json(c), table);
    return "bands: N=" + std::to_string(spec.dim()) + " (" + partition_text(spec) + "), grid " +
           std::to_string(c.grid_x) + "x" + std::to_string(c.grid_y) + ", " +
           std::to_string(table.rows.size()) + " rows in " + fixed(seconds_since(t0)) + " s -> " +
           destination(c.output);
}

Table comb_table(const WavefunctionSamples& w, const char* coordinate)
{
    Table t{{"m", coordinate, "re", "im", "abs2", "arg"}, {}};
    for (std::size_t m = 0; m < w.points.size(); ++m) {
        const auto z = w.weights[m];
        t.add({std::int64_t(m), w.points[m], z.real(), z.imag(), std::norm(z), std::arg(z)});
    }
    return t;
}

std::string sibling(const std::string& output, const std::string& suffix, Format fmt)
{
    std::filesystem::path p(output);
    std::string ext = p.extension().string();
    if (ext.empty())
        ext = fmt == Format::json ? ".json" : ".csv";
    const std::string stem = p.stem().string() + "_" + suffix + ext;
    return (p.parent_path() / stem).string();
}

std::string run_eigenstate(const JobConfig& c, std::ostream& data_out)
{
    const auto t0 = Clock::now();
    json meta = config_json(c);
    const auto st = select_state(c, meta);
    const auto& spec = st.spec;

    const double Lq = spec.position_period(), Lp = spec.momentum_period();
    const std::pair<double, double> qwin =
        c.q_range ? std::pair{c.q_range->lo.value, c.q_range->hi.value} : std::pair{0.0, Lq};
    const std::pair<double, double> pwin =
        c.p_range ? std::pair{c.p_range->lo.value, c.p_range->hi.value} : std::pair{0.0, Lp};
    const auto pos = position_samples(spec, st.label, st.psi, qwin, c.ordering);
    const auto mom = momentum_samples(spec, st.label, st.psi, pwin, c.ordering);
    meta["result"]["position_period"] = Lq;
    meta["result"]["momentum_period"] = Lp;
    meta["result"]["position_spacing"] = spec.position_spacing();
    meta["result"]["momentum_spacing"] = spec.momentum_spacing();

    Table comp{{"index", "j", "k", "re", "im", "abs2"}, {}};
    for (int n = 0; n < spec.dim(); ++n) {
        const int j = c.ordering == Ordering::XPXQ ? n / spec.Ns : n % spec.Nr;
        const int k = c.ordering == Ordering::XPXQ ? n % spec.Ns : n / spec.Nr;
        comp.add({std::int64_t(n), std::int64_t(j), std::int64_t(k), st.psi(n).real(), st.psi(n).imag(),
                  std::norm(st.psi(n))});
    }

    const Format fmt = resolve_format(c.format, c.output, Format::csv);
    const std::string files[3] = {sibling(c.output, "components", fmt), sibling(c.output, "position", fmt),
                                  sibling(c.output, "momentum", fmt)};
    json tagged = meta;
    tagged["content"] = "components";
    emit(c, data_out, files[0], fmt, tagged, comp);
    tagged["content"] = "position";
    emit(c, data_out, files[1], fmt, tagged, comb_table(pos, "q"));
    tagged["content"] = "momentum";
    emit(c, data_out, files[2], fmt, tagged, comb_table(mom, "p"));

    return "eigenstate: N=" + std::to_string(spec.dim()) + " (" + partition_text(spec) + "), band " +
           std::to_string(c.band) + ", omega=" + sci(st.omega) + ", residual=" + sci(st.residual) + ", " +
           std::to_string(pos.points.size()) + " position and " + std::to_string(mom.points.size()) +
           " momentum points in " + fixed(seconds_since(t0)) + " s -> " + files[0] + ", " + files[1] +
           ", " + files[2];
}

std::string run_husimi(const JobConfig& c, std::ostream& data_out)
{
    const auto t0 = Clock::now();
    json meta = config_json(c);
    const auto st = select_state(c, meta);
    const auto& spec = st.spec;
    const double hbar = spec.hbar();

    const double qlo = c.q_range ? c.q_range->lo.value : 0.0;
    const double qhi = c.q_range ? c.q_range->hi.value : spec.position_period();
    const double plo = c.p_range ? c.p_range->lo.value : 0.0;
    const double phi = c.p_range ? c.p_range->hi.value : spec.momentum_period();
    const auto q_axis = linspace(qlo, qhi, c.grid_x);
    const auto p_axis = linspace(plo, phi, c.grid_y);

    // Comb window: plot range plus the Gaussian reach and one lattice step.
    const double margin = c.truncation * std::sqrt(hbar / 2.0) + spec.position_spacing();
    const auto comb = position_samples(spec, st.label, st.psi, {qlo - margin, qhi + margin}, c.ordering);
    const auto H = husimi(comb, q_axis, p_axis, hbar, c.truncation, resolve_threads(c.threads));
    meta["result"]["normalization"] = H.normalization;

    Table table{{"q", "p", "husimi"}, {}};
    table.rows.reserve(q_axis.size() * p_axis.size());
    for (std::size_t i = 0; i < q_axis.size(); ++i)
        for (std::size_t j = 0; j < p_axis.size(); ++j)
            table.add({q_axis[i], p_axis[j], H.values(Eigen::Index(i), Eigen::Index(j))});
    emit(c, data_out, c.output, Format::csv, meta, table);
    return "husimi: N=" + std::to_string(spec.dim()) + " (" + partition_text(spec) + "), band " +
           std::to_string(c.band) + ", grid " + std::to_string(c.grid_x) + "x" + std::to_string(c.grid_y) +
           ", integral=" + fixed(H.normalization, 6) + ", residual=" + sci(st.residual) + " in " +
           fixed(seconds_since(t0)) + " s -> " + destination(c.output);
}

std::string run_poincare(const JobConfig& c, std::ostream& data_out)
{
    const auto t0 = Clock::now();
    std::vector<PhaseSpacePoint> seeds;
    if (c.seeds.empty()) {
        for (int i = 0; i < c.grid_x; ++i)
            for (int j = 0; j < c.grid_y; ++j)
                seeds.push_back({two_pi * (i + 0.5) / c.grid_x, two_pi * (j + 0.5) / c.grid_y});
    } else {
        for (const auto& [q, p] : c.seeds)
            seeds.push_back({q.value, p.value});
    }
    const auto pts = poincare_section(seeds, c.K.value, c.L.value, c.iterations, c.fold,
                                      resolve_threads(c.threads));
    Table table{{"seed", "iteration", "q", "p"}, {}};
    table.rows.reserve(pts.size());
    for (std::size_t m = 0; m < pts.size(); ++m)
        table.add({std::int64_t(m / c.iterations), std::int64_t(m % c.iterations + 1), pts[m].q, pts[m].p});
    emit(c, data_out, c.output, Format::csv, config_json(c), table);
    return "poincare: " + std::to_string(seeds.size()) + " seeds x " + std::to_string(c.iterations) +
           " iterations in " + fixed(seconds_since(t0)) + " s -> " + destination(c.output);
}

std::string run_accel_scan(const JobConfig& c, std::ostream& data_out)
{
    const auto t0 = Clock::now();
    const double qlo = c.q_range ? c.q_range->lo.value : 0.0;
    const double qhi = c.q_range ? c.q_range->hi.value : two_pi;
    const double plo = c.p_range ? c.p_range->lo.value : 0.0;
    const double phi = c.p_range ? c.p_range->hi.value : two_pi;
    const auto mask = accelerator_scan(linspace(qlo, qhi, c.grid_x, false), linspace(plo, phi, c.grid_y, false),
                                       c.K.value, c.L.value, c.iterations, c.threshold,
                                       resolve_threads(c.threads));
    json meta = config_json(c);
    meta["result"] = {{"flagged", mask.count()}};
    if (c.K.value == c.L.value) {
        const auto n = stability_window(c.K.value);
        meta["result"]["stability_window"] = n ? json(*n) : json(nullptr);
    }
    Table table{{"q", "p", "flag"}, {}};
    for (std::size_t i = 0; i < mask.q_axis.size(); ++i)
        for (std::size_t j = 0; j < mask.p_axis.size(); ++j)
            table.add({mask.q_axis[i], mask.p_axis[j], std::int64_t(mask.at(i, j))});
    emit(c, data_out, c.output, Format::csv, meta, table);
    return "accel-scan: " + std::to_string(mask.count()) + " of " + std::to_string(mask.flags.size()) +
           " initial conditions above E=" + sci(c.threshold) + " after " + std::to_string(c.iterations) +
           " iterations in " + fixed(seconds_since(t0)) + " s -> " + destination(c.output);
}

std::string run_convergents(const JobConfig& c, std::ostream& data_out)
{
    const std::size_t count = static_cast<std::size_t>(c.count);
    const auto cf = c.rho.empty() ? c.continued_fraction : named_coefficients(c.rho, count + 1);
    const auto conv = convergents(cf, count);
    const json meta = config_json(c);
    const std::string& path = c.output;
    const Format fmt = resolve_format(c.format, path, Format::json);
    std::string text;
    if (fmt == Format::json) {
        json data = json::array();
        for (const auto& q : conv)
            data.push_back({q.num, q.den});
        text = render_json(meta, data);
    } else {
        Table table{{"index", "M", "N"}, {}};
        for (std::size_t k = 0; k < conv.size(); ++k)
            table.add({std::int64_t(k + 1), conv[k].num, conv[k].den});
        text = render_csv(meta, table);
    }
    if (path.empty())
        data_out << text;
    else
        write_atomic(path, text);
    std::string list;
    for (const auto& q : conv)
        list += (list.empty() ? "" : ", ") + std::to_string(q.num) + "/" + std::to_string(q.den);
    return "convergents: " + list + " -> " + destination(path);
}

struct Check {
    std::string name;
    std::int64_t cases = 0;
    double worst = 0.0;

    void add(double deviation)
    {
        ++cases;
        worst = std::max(worst, deviation);
    }
};

std::string run_verify(const JobConfig& c, std::ostream& data_out)
{
    constexpr double tolerance = 1e-9;
    const auto t0 = Clock::now();
    const auto planck = planck_of(c);
    std::mt19937_64 gen(c.seed);
    std::uniform_real_distribution<double> cell(0.0, planck.hbar), strength(-10.0, 10.0);

    Check construction{"construction"}, unitarity{"unitarity"}, ordering{"ordering"},
        partition{"partition"}, values{"analytic_values"}, vectors{"analytic_vectors"};

    for (auto [Nr, Ns] : divisor_pairs(static_cast<int>(planck.N)))
        for (auto conv : {Convention::A, Convention::B}) {
            const auto spec = subspace_partition(planck, Nr, Ns, conv);
            for (int t = 0; t < c.samples; ++t) {
                const KQLabel label{cell(gen), cell(gen)};
                const auto kick = KickParams::harper(strength(gen), strength(gen));
                const auto fast = floquet_block(spec, label, kick);
                construction.add(
                    (fast.matrix - floquet_block_direct(spec, label, kick)).cwiseAbs().maxCoeff());
                unitarity.add(unitarity_error(fast.matrix));
                const auto w = quasienergies(fast);
                ordering.add(spectral_distance(w, quasienergies(floquet_block(spec, label, kick, Ordering::PXQX))));
                // With M = 1 every convention-A partition spans the same space.
                if (planck.M == 1 && conv == Convention::A)
                    partition.add(spectral_distance(
                        w, quasienergies(floquet_block(subspace_partition(planck, Ns, Nr), label, kick))));
            }
        }

    const auto two = subspace_partition(planck_from_rational(1, 2), 1, 2);
    std::uniform_real_distribution<double> half(0.0, std::numbers::pi);
    for (int t = 0; t < c.samples; ++t) {
        const double r = half(gen), s = half(gen), K = strength(gen), L = strength(gen);
        const auto sol = eigensolve(floquet_block(two, KQLabel{r, s}, KickParams::harper(K, L)));
        const auto exact = analytic_two_level(r, s, K, L, 1e-4);
        values.add(spectral_distance({exact.omega_minus, exact.omega_plus}, sol.quasienergies));
        if (exact.degenerate)
            continue;
        for (int n = 0; n < 2; ++n) {
            const bool plus = std::abs(std::polar(1.0, sol.quasienergies[n]) - std::polar(1.0, exact.omega_plus)) <
                              std::abs(std::polar(1.0, sol.quasienergies[n]) - std::polar(1.0, exact.omega_minus));
            const VectorXc ref = plus ? VectorXc(exact.psi_plus) : VectorXc(exact.psi_minus);
            vectors.add(phase_aligned_distance(sol.eigenvectors.col(n), ref));
        }
    }

    Table table{{"check", "cases", "max_deviation", "tolerance", "pass"}, {}};
    bool all_pass = true;
    const Check* worst = &construction;
    for (const Check* ch : {&construction, &unitarity, &ordering, &partition, &values, &vectors}) {
        if (ch->cases == 0)
            continue;
        const bool pass = ch->worst < tolerance;
        all_pass = all_pass && pass;
        if (ch->worst > worst->worst)
            worst = ch;
        table.add({ch->name, ch->cases, ch->worst, tolerance, std::int64_t(pass)});
    }
    json meta = config_json(c);
    meta["result"] = {{"pass", all_pass}};
    emit(c, data_out, c.output, Format::json, meta, table);
    const std::string summary = "verify: N=" + std::to_string(planck.N) + ", " + std::to_string(table.rows.size()) +
                                " checks, worst deviation " + sci(worst->worst) + " (" + worst->name + ") in " +
                                fixed(seconds_since(t0)) + " s: " + (all_pass ? "PASS" : "FAIL") + " -> " +
                                destination(c.output);
    if (!all_pass)
        throw VerificationFailed(summary);
    return summary;
}

} // namespace

std::string run(const JobConfig& config, std::ostream& data_out)
{
    switch (config.command) {
    case Command::bands: return run_bands(config, data_out);
    case Command::eigenstate: return run_eigenstate(config, data_out);
    case Command::husimi: return run_husimi(config, data_out);
    case Command::poincare: return run_poincare(config, data_out);
    case Command::accel_scan: return run_accel_scan(config, data_out);
    case Command::convergents: return run_convergents(config, data_out);
    case Command::verify: return run_verify(config, data_out);
    }
    throw InvalidArgument("unknown command");
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    try {
        const JobConfig config = validated(parse_command_line(argc, argv));
        const std::string summary = run(config, out);
        (config.output.empty() && config.command != Command::eigenstate ? err : out) << summary << '\n';
        return exit_ok;
    } catch (const EarlyExit& e) {
        return e.code;
    } catch (const InvalidArgument& e) {
        err << "kharper: invalid input: " << e.what() << '\n';
        return exit_validation;
    } catch (const NumericalError& e) {
        err << "kharper: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const IoError& e) {
        err << "kharper: I/O failure: " << e.what() << '\n';
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "kharper: I/O failure: " << e.what() << '\n';
        return exit_io;
    } catch (const std::exception& e) {
        err << "kharper: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace kharper::cli
