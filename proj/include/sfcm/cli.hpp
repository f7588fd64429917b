#ifndef SFCM_CLI_HPP
#define SFCM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sfcm {

/// Exit statuses of the command-line front end.
enum ExitStatus : int { kExitOk = 0, kExitRuntime = 1, kExitUsage = 2 };

/// Entry point behind the `sfcm` executable. `args[0]` is the program name.
/// Subcommands: segment, phantom, compare.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sfcm

#endif  // SFCM_CLI_HPP
