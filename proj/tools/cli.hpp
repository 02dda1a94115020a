#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stabgreedy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFailure = 1;

/// Entry point shared by the executable and the tests. args excludes argv[0].
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stabgreedy::cli
