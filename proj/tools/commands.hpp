#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spatopt::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 runtime or numeric failure, 2 usage or parse failure.
enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageFailure = 2 };

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spatopt::cli
