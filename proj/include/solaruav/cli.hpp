// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 data error (unreadable log, misaligned data, failed model, I/O).
#pragma once

#include <iosfwd>
#include <vector>
#include <string>

namespace solaruav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "SOLARUAV_CONFIG";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace solaruav::cli
