#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betagraph::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNonExistent = 2 };

/// Runs the command line `args` (args[0] is the program name). Regular output
/// goes to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Directory holding the bundled food-web edge list.
std::string default_data_dir();

}  // namespace betagraph::cli
