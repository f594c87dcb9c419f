#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kfull::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming the default fixture directory.
inline constexpr const char* kFixtureEnv = "KFULL_FIXTURES";

/// Runs one command line (without the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kfull::cli
