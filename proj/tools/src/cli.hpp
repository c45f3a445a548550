#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rqmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args excludes the program name) and returns the
/// process exit code. Reports go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rqmc::cli
