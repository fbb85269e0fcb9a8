#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ebsvp::cli {

/// Exit codes: 0 success, 1 unreadable or malformed input, 2 invalid parameters
/// (including unknown subcommands).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitParameter = 2;

/// Parses `args` (args[0] is the program name) and runs the selected
/// subcommand, writing results to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebsvp::cli
