#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcv {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point behind the `rcvsim` binary. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// The worked three-candidate profile used by `rcvsim example`.
std::string example_profile_text();

}  // namespace rcv
