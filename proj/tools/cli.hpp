#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace epiwave::cli {

enum ExitCode : int {
    kOk = 0,
    kParseError = 2,
    kInvariantError = 3,
    kUsageError = 4,
};

/// Runs the command line (args excludes the program name). Never throws;
/// every failure maps onto one of the exit codes above.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace epiwave::cli
