#ifndef AGGSIM_CLI_HPP
#define AGGSIM_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace aggsim::cli {

/// Entry point behind the aggsim binary. Returns the process exit code:
/// 0 success, 1 protocol error (one-line diagnostic on err), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aggsim::cli

#endif
