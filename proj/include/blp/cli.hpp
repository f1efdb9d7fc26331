#pragma once

#include <iosfwd>

namespace blp {

// Exit codes: 0 success (a proven Infeasible result included), 2 usage or
// input error, 3 solver failure or limit.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blp
