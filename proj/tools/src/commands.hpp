#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sisnet::cli {

enum ExitCode : int {
  kOk = 0,
  kIoOrParse = 1,
  kAssumptions = 2,
  kUnidentifiable = 3,
  kNoCertificate = 4,
  kPipelinePrecondition = 5,
};

// Parses `args` (without the program name) and runs the selected command.
// Regular output goes to `out`, diagnostics and warnings to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sisnet::cli
