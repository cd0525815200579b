#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace golm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitEngine = 2;

// Runs the command line (args excludes the program name) and returns the
// exit code: 0 success, 1 input or usage error, 2 engine failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace golm
