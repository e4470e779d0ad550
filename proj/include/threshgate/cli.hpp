#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace threshgate::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kManualAnalysis = 2,
};

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace threshgate::cli
