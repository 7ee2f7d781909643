#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace hqc::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the hqc command line in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hqc::cli
