#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpvdw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitUsage = 64;

/// Environment variable naming a default key=value config file.
inline constexpr const char* kConfigEnv = "CPVDW_CONFIG";

/// args excludes the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpvdw::cli
