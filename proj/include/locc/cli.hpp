#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace locc::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kInvalidInput = 1, kInfeasible = 2 };

/// Runs the `locc` command line. `args` excludes the program name. Results go
/// to `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace locc::cli
