#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace npss::cli {

/// Exit codes: 0 success, 1 usage or validation error, 2 I/O error.
enum ExitCode : int { kOk = 0, kValidation = 1, kIo = 2 };

/// Runs the `npss` command line. `args` excludes the program name. Errors are
/// reported on `err` as a one-line JSON object {"error", "message"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace npss::cli
