#pragma once

#include <ostream>

namespace featnet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the featnet command line: generate, fit, evaluate, explain, curve.
// Returns 0 on success, 1 on usage errors and 2 on data errors.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace featnet
