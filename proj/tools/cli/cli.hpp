#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mlpoisson::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitBadArguments = 2,
  kExitNumericalFailure = 3,
  kExitNotConverged = 4,
};

/// Runs the command line `args` (without the program name). Data goes to
/// `out` unless --output names a file; diagnostics and usage go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlpoisson::cli
