#pragma once

#include "expsamp/run_config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace expsamp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses the shared run flags (no subcommand). Throws Error on bad input.
RunConfig parse_run_config(const std::vector<std::string>& args);

} // namespace expsamp::cli
