#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

/// Runs one command line (without the program name). Diagnostics go to `err`,
/// short summaries to `out`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace slp::cli
