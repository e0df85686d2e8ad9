#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ifslab {

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitInvalid = 2 };

/// Entry point of the `ifslab` command line tool. `args` excludes the
/// program name. Everything meant for the user goes to `out`; diagnostics go
/// to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifslab
