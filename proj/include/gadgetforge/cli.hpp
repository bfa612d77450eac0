#pragma once

#include <string>
#include <vector>

namespace gforge {

inline constexpr const char* kToolVersion = "gadgetforge 0.1.0";

/// Dispatch a command line (without argv[0]). Returns the process exit code:
/// 0 success, 1 verification failure, 2 usage/schema/input errors (budget
/// overruns carry a "budget:" diagnostic). All diagnostics go to stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace gforge
