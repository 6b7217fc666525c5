#include "kharper/config.hpp"

#include "kharper/expr.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <sstream>

namespace kharper::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
        parts.push_back(cur);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

template <class Int>
Int parse_int(const std::string& field, const std::string& text)
{
    Int v{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size())
        throw ValidationError(field, "expected an integer, got '" + text + "'");
    return v;
}

std::pair<int, int> parse_grid(const std::string& field, const std::string& text)
{
    const auto parts = split(text, 'x');
    if (parts.size() != 2)
        throw ValidationError(field, "expected AxB, got '" + text + "'");
    return {parse_int<int>(field, parts[0]), parse_int<int>(field, parts[1])};
}

Range parse_range(const std::string& field, const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2)
        throw ValidationError(field, "expected lo,hi, got '" + text + "'");
    return {parse_quantity(field, parts[0]), parse_quantity(field, parts[1])};
}

std::vector<Quantity> parse_list(const std::string& field, const std::string& text)
{
    std::vector<Quantity> out;
    for (const auto& part : split(text, ','))
        out.push_back(parse_quantity(field, part));
    return out;
}

// "0,2,5-7" -> {0, 2, 5, 6, 7}
std::vector<int> parse_band_list(const std::string& field, const std::string& text)
{
    std::vector<int> out;
    for (const auto& part : split(text, ',')) {
        const auto dash = part.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(parse_int<int>(field, part));
            continue;
        }
        const int lo = parse_int<int>(field, part.substr(0, dash));
        const int hi = parse_int<int>(field, part.substr(dash + 1));
        if (hi < lo)
            throw ValidationError(field, "empty band range '" + part + "'");
        for (int b = lo; b <= hi; ++b)
            out.push_back(b);
    }
    return out;
}

std::vector<double> values_of(const std::vector<Quantity>& qs)
{
    std::vector<double> out;
    for (const auto& q : qs)
        out.push_back(q.value);
    return out;
}

nlohmann::ordered_json quantity_json(const Quantity& q)
{
    if (q.text.empty())
        return q.value;
    return {{"expr", q.text}, {"value", q.value}};
}

nlohmann::ordered_json series_json(const std::vector<Quantity>& qs)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& q : qs)
        arr.push_back(q.value);
    return arr;
}

struct Raw {
    std::string K = "0", L = "0", r = "0", s = "0";
    std::string V_cos, V_sin, W_cos, W_sin;
    std::string convention = "A", ordering = "xpxq";
    std::string grid, bands, q_range, p_range, format = "auto", cf;
    std::vector<std::string> seeds;
    bool no_fold = false;
};

void add_common(CLI::App* sub, JobConfig& c, Raw& raw, bool lattice, bool output = true)
{
    if (lattice) {
        sub->add_option("--M", c.M, "numerator of hbar / 2 pi")->capture_default_str();
        sub->add_option("--N", c.N, "denominator of hbar / 2 pi")->required();
        sub->add_option("--Nr", c.Nr, "position-comb count of the partition (default N)");
        sub->add_option("--Ns", c.Ns, "momentum-comb count of the partition (default 1)");
        sub->add_option("--convention", raw.convention, "comb spacing convention, A or B")
            ->capture_default_str();
    }
    if (output) {
        sub->add_option("-o,--output", c.output, "output file (default: standard output)");
        sub->add_option("--format", raw.format, "csv, json or auto (from the file extension)")
            ->capture_default_str();
    }
    sub->add_option("--threads", c.threads, "worker threads (0: $KHARPER_THREADS or all cores)");
}

void add_kick(CLI::App* sub, Raw& raw, bool series)
{
    sub->add_option("--K", raw.K, "kick strength, e.g. 2pi+0.1")->capture_default_str();
    sub->add_option("--L", raw.L, "kinetic strength")->capture_default_str();
    if (series) {
        sub->add_option("--V-cos", raw.V_cos, "cosine coefficients of V, replacing K cos q");
        sub->add_option("--V-sin", raw.V_sin, "sine coefficients of V");
        sub->add_option("--W-cos", raw.W_cos, "cosine coefficients of W, replacing L cos p");
        sub->add_option("--W-sin", raw.W_sin, "sine coefficients of W");
    }
}

void add_state(CLI::App* sub, JobConfig& c, Raw& raw)
{
    sub->add_option("--r", raw.r, "quasi-position label in [0, hbar)")->capture_default_str();
    sub->add_option("--s", raw.s, "quasi-momentum label in [0, hbar)")->capture_default_str();
    sub->add_option("--band", c.band, "eigenstate index in ascending quasi-energy order")
        ->capture_default_str();
    sub->add_option("--ordering", raw.ordering, "xpxq or pxqx")->capture_default_str();
}

} // namespace

std::string command_name(Command c)
{
    switch (c) {
    case Command::bands: return "bands";
    case Command::eigenstate: return "eigenstate";
    case Command::husimi: return "husimi";
    case Command::poincare: return "poincare";
    case Command::accel_scan: return "accel-scan";
    case Command::convergents: return "convergents";
    case Command::verify: return "verify";
    }
    return "?";
}

Quantity parse_quantity(const std::string& field, const std::string& text)
{
    try {
        return {text, evaluate_expression(text)};
    } catch (const InvalidArgument& e) {
        throw ValidationError(field, e.what());
    }
}

JobConfig parse_command_line(int argc, const char* const* argv)
{
    CLI::App app{"Block-reduced spectra, eigenstates and phase-space pictures of the kicked Harper model",
                 "kharper"};
    app.require_subcommand(1);
    JobConfig c;
    Raw raw;

    auto* bands = app.add_subcommand("bands", "quasi-energy bands over a uniform (r, s) grid");
    add_common(bands, c, raw, true);
    add_kick(bands, raw, true);
    bands->add_option("--grid", raw.grid, "r x s samples (default 16x16)");
    bands->add_option("--bands", raw.bands, "band indices to keep, e.g. 0,5-9 (default all)");
    bands->add_option("--ordering", raw.ordering, "xpxq or pxqx")->capture_default_str();

    auto* eig = app.add_subcommand("eigenstate",
                                   "one eigenstate: components, position and momentum combs");
    add_common(eig, c, raw, true);
    add_kick(eig, raw, true);
    add_state(eig, c, raw);
    eig->add_option("--q-range", raw.q_range, "position window lo,hi (default one period from 0)");
    eig->add_option("--p-range", raw.p_range, "momentum window lo,hi (default one period from 0)");

    auto* hus = app.add_subcommand("husimi", "Husimi distribution of one eigenstate");
    add_common(hus, c, raw, true);
    add_kick(hus, raw, true);
    add_state(hus, c, raw);
    hus->add_option("--grid", raw.grid, "q x p samples (default 64x64)");
    hus->add_option("--q-range", raw.q_range, "q0 range lo,hi, inclusive (default one period)");
    hus->add_option("--p-range", raw.p_range, "p0 range lo,hi, inclusive (default one period)");
    hus->add_option("--truncation", c.truncation, "Gaussian cut-off in units of sigma")
        ->capture_default_str();

    auto* poin = app.add_subcommand("poincare", "orbits of the classical map");
    add_common(poin, c, raw, false);
    add_kick(poin, raw, false);
    poin->add_option("--grid", raw.grid, "seed grid over [0, 2pi)^2 (default 20x20)");
    poin->add_option("--seed", raw.seeds, "explicit seed q,p (repeatable; replaces the grid)");
    poin->add_option("--iterations", c.iterations, "map steps per seed (default 500)");
    poin->add_flag("--no-fold", raw.no_fold, "keep unfolded coordinates");

    auto* acc = app.add_subcommand("accel-scan", "initial conditions that gain energy");
    add_common(acc, c, raw, false);
    add_kick(acc, raw, false);
    acc->add_option("--grid", raw.grid, "q x p initial conditions (default 100x100)");
    acc->add_option("--q-range", raw.q_range, "q range lo,hi, right end excluded (default 0,2pi)");
    acc->add_option("--p-range", raw.p_range, "p range lo,hi, right end excluded (default 0,2pi)");
    acc->add_option("--iterations", c.iterations, "map steps (default 800)");
    acc->add_option("--threshold", c.threshold, "energy threshold")->capture_default_str();

    auto* conv = app.add_subcommand("convergents", "rational approximants M/N of a number");
    add_common(conv, c, raw, false);
    conv->add_option("--rho", c.rho, "named number: golden-sixth or golden");
    conv->add_option("--cf", raw.cf, "continued fraction coefficients a0,a1,...");
    conv->add_option("--count", c.count, "number of convergents")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "oracle checks of the block construction");
    add_common(ver, c, raw, true);
    ver->add_option("--samples", c.samples, "random draws per partition")->capture_default_str();
    ver->add_option("--seed", c.seed, "random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        throw EarlyExit{app.exit(e, std::cout, std::cerr)};
    } catch (const CLI::CallForAllHelp& e) {
        throw EarlyExit{app.exit(e, std::cout, std::cerr)};
    } catch (const CLI::ParseError& e) {
        throw ValidationError("command line", e.what());
    }

    const std::pair<CLI::App*, Command> table[] = {
        {bands, Command::bands},       {eig, Command::eigenstate},
        {hus, Command::husimi},        {poin, Command::poincare},
        {acc, Command::accel_scan},    {conv, Command::convergents},
        {ver, Command::verify}};
    for (auto [sub, cmd] : table)
        if (sub->parsed())
            c.command = cmd;

    c.K = parse_quantity("--K", raw.K);
    c.L = parse_quantity("--L", raw.L);
    c.r = parse_quantity("--r", raw.r);
    c.s = parse_quantity("--s", raw.s);
    if (!raw.V_cos.empty()) c.V_cos = parse_list("--V-cos", raw.V_cos);
    if (!raw.V_sin.empty()) c.V_sin = parse_list("--V-sin", raw.V_sin);
    if (!raw.W_cos.empty()) c.W_cos = parse_list("--W-cos", raw.W_cos);
    if (!raw.W_sin.empty()) c.W_sin = parse_list("--W-sin", raw.W_sin);

    if (raw.convention == "A" || raw.convention == "a")
        c.convention = Convention::A;
    else if (raw.convention == "B" || raw.convention == "b")
        c.convention = Convention::B;
    else
        throw ValidationError("--convention", "expected A or B, got '" + raw.convention + "'");

    if (raw.ordering == "xpxq")
        c.ordering = Ordering::XPXQ;
    else if (raw.ordering == "pxqx")
        c.ordering = Ordering::PXQX;
    else
        throw ValidationError("--ordering", "expected xpxq or pxqx, got '" + raw.ordering + "'");

    if (raw.format == "csv")
        c.format = Format::csv;
    else if (raw.format == "json")
        c.format = Format::json;
    else if (raw.format == "auto")
        c.format = Format::automatic;
    else
        throw ValidationError("--format", "expected csv, json or auto, got '" + raw.format + "'");

    if (!raw.grid.empty())
        std::tie(c.grid_x, c.grid_y) = parse_grid("--grid", raw.grid);
    if (!raw.bands.empty())
        c.band_selection = parse_band_list("--bands", raw.bands);
    if (!raw.q_range.empty())
        c.q_range = parse_range("--q-range", raw.q_range);
    if (!raw.p_range.empty())
        c.p_range = parse_range("--p-range", raw.p_range);
    for (const auto& text : raw.seeds) {
        const auto rg = parse_range("--seed", text);
        c.seeds.emplace_back(rg.lo, rg.hi);
    }
    if (!raw.cf.empty())
        for (const auto& part : split(raw.cf, ','))
            c.continued_fraction.push_back(parse_int<std::int64_t>("--cf", part));
    c.fold = !raw.no_fold;
    return c;
}

PlanckParam planck_of(const JobConfig& c)
{
    try {
        return planck_from_rational(c.M, c.N);
    } catch (const InvalidArgument& e) {
        throw ValidationError(c.M < 1 ? "--M" : "--N", e.what());
    }
}

LatticeSpec lattice_of(const JobConfig& c)
{
    const auto planck = planck_of(c);
    try {
        return subspace_partition(planck, c.Nr, c.Ns, c.convention);
    } catch (const PartitionError& e) {
        throw ValidationError("--Nr/--Ns", e.what());
    }
}

KickParams kick_of(const JobConfig& c)
{
    KickParams kick = KickParams::harper(c.K.value, c.L.value);
    if (!c.V_cos.empty() || !c.V_sin.empty())
        kick.V = PeriodicFunction{values_of(c.V_cos), values_of(c.V_sin)};
    if (!c.W_cos.empty() || !c.W_sin.empty())
        kick.W = PeriodicFunction{values_of(c.W_cos), values_of(c.W_sin)};
    return kick;
}

JobConfig validated(JobConfig c)
{
    const bool quantum = c.command == Command::bands || c.command == Command::eigenstate ||
                         c.command == Command::husimi || c.command == Command::verify;
    if (c.threads < 0)
        throw ValidationError("--threads", "must be >= 0");

    if (quantum) {
        const auto planck = planck_of(c);
        if (planck.N > 100000)
            throw ValidationError("--N", "block dimension " + std::to_string(planck.N) +
                                             " is beyond dense-matrix scale");
        if (c.Nr == 0 && c.Ns == 0) {
            c.Nr = static_cast<int>(planck.N);
            c.Ns = 1;
        } else if (c.Nr == 0 && c.Ns > 0 && planck.N % c.Ns == 0) {
            c.Nr = static_cast<int>(planck.N / c.Ns);
        } else if (c.Ns == 0 && c.Nr > 0 && planck.N % c.Nr == 0) {
            c.Ns = static_cast<int>(planck.N / c.Nr);
        }
        // Store the reduced fraction so metadata records the actual hbar.
        c.M = planck.M;
        c.N = planck.N;
        lattice_of(c);
    }

    for (auto* q : {&c.K, &c.L, &c.r, &c.s})
        if (!std::isfinite(q->value))
            throw ValidationError("--K/--L/--r/--s", "value must be finite");
    try {
        const auto kick = kick_of(c);
        validate_periodic(kick.V, "V");
        validate_periodic(kick.W, "W");
    } catch (const InvalidArgument& e) {
        throw ValidationError("--V-*/--W-*", e.what());
    }

    auto check_range = [](const std::optional<Range>& rg, const char* field) {
        if (rg && !(rg->hi.value > rg->lo.value))
            throw ValidationError(field, "upper end must exceed lower end");
    };
    check_range(c.q_range, "--q-range");
    check_range(c.p_range, "--p-range");

    switch (c.command) {
    case Command::bands:
        if (c.grid_x == 0 && c.grid_y == 0)
            c.grid_x = c.grid_y = 16;
        if (c.grid_x < 1 || c.grid_y < 1)
            throw ValidationError("--grid", "needs at least one sample per axis");
        for (int b : c.band_selection)
            if (b < 0 || b >= c.Nr * c.Ns)
                throw ValidationError("--bands", "index " + std::to_string(b) + " outside [0, " +
                                                      std::to_string(c.Nr * c.Ns) + ")");
        break;
    case Command::eigenstate:
    case Command::husimi:
        if (c.band < 0 || c.band >= c.Nr * c.Ns)
            throw ValidationError("--band", "index " + std::to_string(c.band) + " outside [0, " +
                                                std::to_string(c.Nr * c.Ns) + ")");
        if (c.command == Command::eigenstate && c.output.empty())
            throw ValidationError("--output", "eigenstate writes three files and needs an output path");
        if (c.command == Command::husimi) {
            if (c.grid_x == 0 && c.grid_y == 0)
                c.grid_x = c.grid_y = 64;
            if (c.grid_x < 1 || c.grid_y < 1)
                throw ValidationError("--grid", "needs at least one sample per axis");
            if (!(c.truncation > 0.0) || !std::isfinite(c.truncation))
                throw ValidationError("--truncation", "must be positive");
        }
        break;
    case Command::poincare:
        if (c.iterations == 0)
            c.iterations = 500;
        if (c.iterations < 1)
            throw ValidationError("--iterations", "must be >= 1");
        if (c.seeds.empty()) {
            if (c.grid_x == 0 && c.grid_y == 0)
                c.grid_x = c.grid_y = 20;
            if (c.grid_x < 1 || c.grid_y < 1)
                throw ValidationError("--grid", "needs at least one seed per axis");
        }
        break;
    case Command::accel_scan:
        if (c.iterations == 0)
            c.iterations = 800;
        if (c.iterations < 0)
            throw ValidationError("--iterations", "must be >= 0");
        if (c.grid_x == 0 && c.grid_y == 0)
            c.grid_x = c.grid_y = 100;
        if (c.grid_x < 1 || c.grid_y < 1)
            throw ValidationError("--grid", "needs at least one point per axis");
        if (!std::isfinite(c.threshold))
            throw ValidationError("--threshold", "must be finite");
        break;
    case Command::convergents:
        if (c.count < 1)
            throw ValidationError("--count", "must be >= 1");
        if (c.rho.empty() == c.continued_fraction.empty())
            throw ValidationError("--rho/--cf", "give exactly one of --rho and --cf");
        if (!c.rho.empty()) {
            try {
                named_coefficients(c.rho, 1);
            } catch (const InvalidArgument& e) {
                throw ValidationError("--rho", e.what());
            }
        }
        for (std::size_t i = 1; i < c.continued_fraction.size(); ++i)
            if (c.continued_fraction[i] < 1)
                throw ValidationError("--cf", "coefficients after the first must be positive");
        break;
    case Command::verify:
        if (c.samples < 1)
            throw ValidationError("--samples", "must be >= 1");
        break;
    }
    return c;
}

nlohmann::ordered_json config_json(const JobConfig& c)
{
    nlohmann::ordered_json j;
    j["program"] = "kharper";
    j["command"] = command_name(c.command);
    const bool quantum = c.command == Command::bands || c.command == Command::eigenstate ||
                         c.command == Command::husimi || c.command == Command::verify;
    if (quantum) {
        j["M"] = c.M;
        j["N"] = c.N;
        j["hbar"] = two_pi * double(c.M) / double(c.N);
        j["Nr"] = c.Nr;
        j["Ns"] = c.Ns;
        j["convention"] = c.convention == Convention::A ? "A" : "B";
    }
    if (c.command != Command::convergents && c.command != Command::verify) {
        j["K"] = quantity_json(c.K);
        j["L"] = quantity_json(c.L);
        if (!c.V_cos.empty() || !c.V_sin.empty())
            j["V"] = {{"cos", series_json(c.V_cos)}, {"sin", series_json(c.V_sin)}};
        if (!c.W_cos.empty() || !c.W_sin.empty())
            j["W"] = {{"cos", series_json(c.W_cos)}, {"sin", series_json(c.W_sin)}};
    }
    auto range_json = [](const Range& rg) {
        return nlohmann::ordered_json{quantity_json(rg.lo), quantity_json(rg.hi)};
    };
    switch (c.command) {
    case Command::bands:
        j["ordering"] = c.ordering == Ordering::XPXQ ? "xpxq" : "pxqx";
        j["grid"] = {c.grid_x, c.grid_y};
        if (!c.band_selection.empty())
            j["bands"] = c.band_selection;
        break;
    case Command::eigenstate:
    case Command::husimi:
        j["ordering"] = c.ordering == Ordering::XPXQ ? "xpxq" : "pxqx";
        j["r"] = quantity_json(c.r);
        j["s"] = quantity_json(c.s);
        j["band"] = c.band;
        if (c.q_range)
            j["q_range"] = range_json(*c.q_range);
        if (c.p_range)
            j["p_range"] = range_json(*c.p_range);
        if (c.command == Command::husimi) {
            j["grid"] = {c.grid_x, c.grid_y};
            j["truncation"] = c.truncation;
        }
        break;
    case Command::poincare:
        j["iterations"] = c.iterations;
        j["fold"] = c.fold;
        if (c.seeds.empty()) {
            j["grid"] = {c.grid_x, c.grid_y};
        } else {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& [q, p] : c.seeds)
                arr.push_back({q.value, p.value});
            j["seeds"] = arr;
        }
        break;
    case Command::accel_scan:
        j["grid"] = {c.grid_x, c.grid_y};
        if (c.q_range)
            j["q_range"] = range_json(*c.q_range);
        if (c.p_range)
            j["p_range"] = range_json(*c.p_range);
        j["iterations"] = c.iterations;
        j["threshold"] = c.threshold;
        break;
    case Command::convergents:
        if (!c.rho.empty())
            j["rho"] = c.rho;
        else
            j["cf"] = c.continued_fraction;
        j["count"] = c.count;
        break;
    case Command::verify:
        j["samples"] = c.samples;
        j["seed"] = c.seed;
        break;
    }
    return j;
}

} // namespace kharper::cli
