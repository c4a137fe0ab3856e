#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polarsc {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInternal = 3;

// Runs one CLI invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// FNV-1a 64 of a string, rendered as 16 hex digits.
std::string config_hash(const std::string& canonical);

} // namespace polarsc
