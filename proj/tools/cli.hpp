#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mapfz::cli {

enum ExitCode { kOk = 0, kSolverFailure = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mapfz::cli
