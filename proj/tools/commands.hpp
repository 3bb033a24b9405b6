#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lrga::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

/// Environment variable naming the default directory for reports.
inline constexpr const char* kOutDirEnv = "LRGA_OUT_DIR";

/// Runs one invocation; args excludes the program name. Reports go to `out`
/// unless an output path is configured, diagnostics and the run manifest
/// (when no output path exists) go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lrga::cli
