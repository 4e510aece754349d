#pragma once

#include <iosfwd>

namespace xmarket {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitWitness = 1;  // unstable / deviation found / search budget exhausted
inline constexpr int kExitInvalid = 2;  // usage, file or validation error

/// Runs the `xmarket` command line with argv[0] as the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xmarket
