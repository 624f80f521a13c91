#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace prsg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUncorrectable = 1;
inline constexpr int kExitConfigError = 2;

// args[0] is the program name. Output goes to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prsg::cli
