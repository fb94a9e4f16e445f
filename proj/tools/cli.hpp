#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cubex::cli {

enum ExitCode : int {
  kOk = 0,
  kRejected = 1,      // not special, certificate rejected
  kInconclusive = 2,  // search budget exhausted
  kInvalidInput = 3,
  kInternal = 70,
  kUsage = 64,
};

/// Runs the tool on argv[1..]. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cubex::cli
