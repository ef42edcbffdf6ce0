#pragma once

#include <string>
#include <vector>

namespace oscwell {

/// Entry point behind the `oscwell` binary; returns the process exit code
/// (0 success, 1 check failure, 2 invalid config, 3 numerical failure).
int run_cli(const std::vector<std::string>& args);

}  // namespace oscwell
