#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace swgame::tools {

enum ExitStatus : int {
  exit_ok = 0,
  exit_validation = 1,
  exit_input = 2,
  exit_solver = 3,
  exit_simulation = 4,
};

// Runs the command line `args` (without the program name). Diagnostics go
// to `err`, short summaries to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swgame::tools
