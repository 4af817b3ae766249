#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roadsearch::cli {

enum ExitCode : int {
  kOk = 0,
  kBadInput = 2,
  kNoPath = 3,
  kFailed = 4,
};

/// Runs `roadsearch <command> ...`; args excludes the program name.
/// Machine-readable output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace roadsearch::cli
