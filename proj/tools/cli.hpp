#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symquad::cli {

enum ExitCode : int {
  kOk = 0,
  kNoRules = 1,
  kUsage = 2,
};

/// Runs one command line (args excludes the program name). Output lines
/// are `key=value` pairs so callers can parse them.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace symquad::cli
