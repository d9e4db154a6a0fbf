#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpslab {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  exit_pass = 0,
  exit_acceptance_fail = 1,
  exit_config_error = 2,
  exit_replicate_budget = 3,
  exit_numerical_error = 4,
};

/// Entry point behind the `rpslab` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace rpslab
