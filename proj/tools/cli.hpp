#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNoTargets = 2;

/// Runs one `ccl` invocation. `args` excludes the program name; `in` backs the `-` path.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace ccl::cli
