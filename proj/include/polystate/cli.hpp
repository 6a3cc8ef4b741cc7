#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace polystate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitImpossible = 2;
inline constexpr int kSchemaVersion = 1;

// Runs one invocation. args excludes the program name. Results go to out,
// diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polystate::cli
