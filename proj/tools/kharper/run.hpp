#pragma once

#include "kharper/config.hpp"

#include <iosfwd>
#include <string>

namespace kharper::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_validation = 2,
    exit_numerical = 3,
    exit_io = 4,
};

/// Runs a validated job: computes, writes the output file(s) and returns the
/// one-line summary. Library exceptions propagate.
std::string run(const JobConfig& config, std::ostream& data_out);

/// argv -> exit status, with errors mapped to the documented codes and
/// reported on `err`. The summary goes to `out` (to `err` when data is
/// written to `out`).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace kharper::cli
