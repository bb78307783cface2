#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace conjbound::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFail = 2;

// Runs one command line (args excludes the program name).  Reports go to the
// --out file when given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace conjbound::cli
