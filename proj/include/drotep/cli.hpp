#pragma once

// Command-line front end: solve | evaluate | compare | validate.
//
// Exit codes: 0 converged / success, 1 error, 2 stopped at a limit with
// valid bounds (or a partial compare).

#include <iosfwd>
#include <string>
#include <vector>

namespace drotep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitLimit = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace drotep
