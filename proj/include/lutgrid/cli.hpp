#ifndef LUTGRID_CLI_HPP
#define LUTGRID_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lutgrid::cli {

/// Runs the command line `args` (program name excluded). Returns the process
/// exit code: 0 on success, 2 on usage or input errors, 1 on internal errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lutgrid::cli

#endif // LUTGRID_CLI_HPP
