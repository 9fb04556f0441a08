#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitDivergence = 4;

/// Parses args (without the program name) and runs one subcommand. Reports go
/// to `out`, diagnostics and usage text to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlra::cli
