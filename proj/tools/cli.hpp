#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mklsvm::cli {

enum ExitCode : int {
  kOk = 0,
  kQuantitativeFailure = 1,
  kUsageError = 2,
  kRuntimeError = 3,
};

// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mklsvm::cli
