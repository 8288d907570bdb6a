#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skyhw {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "SKYHW_OUT_DIR";

// Entry point of the `skyhw` tool: validate, simulate, scenario, metrics.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skyhw
