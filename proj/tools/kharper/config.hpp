#pragma once

#include "kharper/kharper.hpp"
#include "kharper/output.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kharper::cli {

enum class Command { bands, eigenstate, husimi, poincare, accel_scan, convergents, verify };

std::string command_name(Command c);

/// A caller-supplied value failed validation; `field` names the flag.
class ValidationError : public InvalidArgument {
public:
    ValidationError(const std::string& field, const std::string& what)
        : InvalidArgument(field + ": " + what), field_(field)
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A number given on the command line, kept with its source text.
struct Quantity {
    std::string text;
    double value = 0.0;
};

struct Range {
    Quantity lo, hi;
};

struct JobConfig {
    Command command = Command::bands;

    std::int64_t M = 1;
    std::int64_t N = 0;
    int Nr = 0; // 0: the (N, 1) partition
    int Ns = 0;
    Convention convention = Convention::A;
    Ordering ordering = Ordering::XPXQ;

    Quantity K{"0", 0.0};
    Quantity L{"0", 0.0};
    // Optional Fourier coefficients replacing K cos q / L cos p.
    std::vector<Quantity> V_cos, V_sin, W_cos, W_sin;

    Quantity r{"0", 0.0};
    Quantity s{"0", 0.0};
    int band = 0;
    std::vector<int> band_selection; // bands: empty keeps every band

    int grid_x = 0; // 0: per-command default
    int grid_y = 0;
    std::optional<Range> q_range, p_range;
    double truncation = default_husimi_truncation;

    int iterations = 0; // 0: per-command default
    double threshold = 3500.0;
    bool fold = true;
    std::vector<std::pair<Quantity, Quantity>> seeds;

    std::string rho;
    std::vector<std::int64_t> continued_fraction;
    int count = 7;

    int samples = 20;
    std::uint64_t seed = 1;

    std::string output; // empty: standard output
    Format format = Format::automatic;
    int threads = 0;    // 0: KHARPER_THREADS or hardware concurrency
};

/// Thrown after --help output; carries the exit status.
struct EarlyExit {
    int code = 0;
};

/// Parses argv (argv[0] is the program name). Malformed input raises
/// ValidationError; --help prints usage and throws EarlyExit.
JobConfig parse_command_line(int argc, const char* const* argv);

/// Applies per-command defaults and checks every field against the library
/// preconditions. Throws ValidationError.
JobConfig validated(JobConfig config);

PlanckParam planck_of(const JobConfig& config);
LatticeSpec lattice_of(const JobConfig& config);
KickParams kick_of(const JobConfig& config);

/// Full configuration for output metadata. The worker count is left out on
/// purpose: results do not depend on it.
nlohmann::ordered_json config_json(const JobConfig& config);

Quantity parse_quantity(const std::string& field, const std::string& text);

} // namespace kharper::cli
