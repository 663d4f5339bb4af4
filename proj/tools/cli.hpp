#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heatcontent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Normal output goes to `out` (or the --output
// file), diagnostics to `err`. Returns kExitUsage for parse errors and
// arguments outside an operation's domain, kExitFailure for failed
// verification or numerical failure, kExitOk otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heatcontent::cli
