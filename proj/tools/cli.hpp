#pragma once

#include <string>
#include <vector>

namespace ima::cli {

/// Exit codes: 0 success, 2 usage or parse error, 3 I/O failure, 4 numerical failure.
enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kNumerical = 4 };

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args);

}  // namespace ima::cli
