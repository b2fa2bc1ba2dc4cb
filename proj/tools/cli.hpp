#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "spreaddim/spread.hpp"

namespace spreaddim::cli {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    parse_error = 2,
    validation_error = 3,
    domain_error = 4,
};

/// Parses "auto", "lo:hi:count[:log|lin]", a comma list "a,b,c", or a single
/// value. Returns nullopt for "auto".
std::optional<ScaleGrid> parse_grid(const std::string& spec);

/// Threads from SPREADDIM_THREADS, else hardware concurrency; a positive
/// flag value wins over both.
unsigned resolve_threads(int flag_value);

/// Runs the command line. Human diagnostics go to `err`; `out` only receives
/// artifacts that were not redirected to files.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spreaddim::cli
