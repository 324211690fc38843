#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamtree::cli {

enum ExitCode : int {
  kOk = 0,
  kRunFailed = 1,
  kUsage = 2,
  kIoError = 3,
};

// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutEnv = "STREAMTREE_OUT";

// args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace streamtree::cli
