#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magwave::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kValidation = 2, kNotConverged = 3 };

/// Environment variable that overrides the output directory of the config file.
inline constexpr const char* kOutDirEnv = "MAGWAVE_OUT_DIR";

/// Runs one subcommand. `args` excludes the program name, e.g. {"spectrum", "run.ini"}.
/// Writes <command>.json plus CSV files into the output directory and a summary to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string usage();

}  // namespace magwave::cli
