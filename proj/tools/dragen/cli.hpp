#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dragen::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one invocation. `args` excludes the program name. Machine output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dragen::cli
