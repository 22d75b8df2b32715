#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace steinkit::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kMalformedJson = 2,
  kSchemaError = 3,
  kNumericalError = 4,
};

/// Runs the command line `args` (args[0] is the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace steinkit::cli
