#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entrain::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kBadArguments = 2, kIntegrationFailure = 3 };

/// Runs the `entrain` command line (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests: `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entrain::cli
