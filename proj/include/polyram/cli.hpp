#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polyram::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kDomain = 3,
  kVerification = 4,
  kResource = 5,
};

/// Runs one command line (without the program name). Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyram::cli
