#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toa::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kNumericCheckFailed = 1,
    kUsageError = 2,
};

/// Runs the command line `toa <command> [options]`. `args` excludes the
/// program name. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

/// Reads a flat `key = value` config file ('#' starts a comment) into
/// `--key=value` tokens.
std::vector<std::string> config_tokens(const std::string& path);

}  // namespace toa::cli
