#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace edgecap::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,       // runtime, I/O or validation failure
  kUsage = 2,         // bad flags or invalid values
  kUnsatisfied = 3,   // analyze: requirement not met
};

/// Entry point of the `edgecap` tool: analyze, fit, simulate, sweep, validate.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace edgecap::cli
