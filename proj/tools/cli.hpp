#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ckem::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_input = 1,
    exit_domain = 2,
    exit_no_convergence = 3,
};

// Runs one command line (args[0] is the program name). Reports go to `out` unless --output is
// given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckem::cli
