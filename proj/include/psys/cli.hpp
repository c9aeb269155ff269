#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace psys {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,       // parse, validation or usage error
    kExitVerifyFailed = 2,  // a truth-table row disagreed with the oracle
    kExitTimeout = 3,       // a truth-table run exhausted its budget
};

/// Entry point of the `psys` tool. `args` includes the program name.
/// Reports and traces go to files or `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psys
