#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hoaxnet {

inline constexpr const char* kVersion = "1.0.0";

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Runs one command; `args` excludes the program name
/// (e.g. {"threshold", "--alpha-steps", "11"}). Results without --out go to `out`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace hoaxnet
