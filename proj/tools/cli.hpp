#ifndef MDSL_TOOLS_CLI_HPP
#define MDSL_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mdsl::cli {

/// Runs one command; `args` excludes the program name. Outputs not redirected to a file go
/// to `out`, diagnostics to `err`. Returns 0 iff no error diagnostic was emitted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdsl::cli

#endif
