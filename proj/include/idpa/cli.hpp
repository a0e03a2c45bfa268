#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idpa {

// Exit codes are a contract: 0 clean, 1 gated threats found, 2 usage, parse,
// or validation errors. No other codes.
inline constexpr int kExitClean = 0;
inline constexpr int kExitGated = 1;
inline constexpr int kExitError = 2;

// Runs the command line given argv-style arguments (without the program
// name). Reports go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idpa
