#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace srploc::cli {

/// Stable exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kIoError = 3,
  kNoSignal = 4,
};

/// Runs one CLI invocation (args exclude the program name). All normal
/// output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srploc::cli
