#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace streamsplit::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Environment variable consulted for --seed when the flag is absent.
inline constexpr const char* kSeedEnvVar = "STREAMSPLIT_SEED";

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Reports go to `out` as one JSON object per line, diagnostics
/// to `err`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace streamsplit::cli
