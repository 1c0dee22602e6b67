#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptmc::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kValidation = 3,
  kCapacity = 4,
  kCheckFailed = 5,
};

inline constexpr const char* kVersion = "0.1.0";
/// Default output directory when --out is not given.
inline constexpr const char* kOutputDirEnv = "PTMC_OUTPUT_DIR";

/// Runs one command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptmc::cli
