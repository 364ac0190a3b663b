#pragma once

#include <iosfwd>

namespace hallmhd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMonitor = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Entry point of the hallmhd tool: run, verify, mms, oracle, lp.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hallmhd
