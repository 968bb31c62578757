#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace cbiou::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `cbiou` tool. `args` excludes the program name.
/// Returns 0 on success, 1 on a usage error and 2 on a data error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cbiou::cli
