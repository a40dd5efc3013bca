#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace balance {

/// Exit codes.
inline constexpr int kExitHolds = 0;
inline constexpr int kExitWitness = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `balance` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace balance
