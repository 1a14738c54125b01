#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace topicret::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,
    kUsageError = 2,
    kDataError = 3,
    kRemoteError = 4,
};

/// Runs one command line (args excludes the program name). Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

} // namespace topicret::cli
