#ifndef GCLUST_TOOLS_COMMANDS_HPP
#define GCLUST_TOOLS_COMMANDS_HPP

#include <ostream>
#include <string>
#include <vector>

namespace gclust::cli {

enum ExitCode { kSuccess = 0, kTimeout = 1, kUsage = 2 };

/// Runs the command line `args` (without the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gclust::cli

#endif  // GCLUST_TOOLS_COMMANDS_HPP
