#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modop::cli {

// Exit codes: 0 success or verification passed, 1 usage/config/input error,
// 2 verification failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailed = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modop::cli
