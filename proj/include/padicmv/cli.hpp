#pragma once

// Command-line front end. Every command reads a flat key=value parameter map
// (from flags, or from a --config file that flags override), validated
// against the documented key set of that command.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace padicmv::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 1,
    kVerificationFailed = 2,
    kBudgetExceeded = 3,
};

struct ExperimentConfig {
    std::string command;
    std::map<std::string, std::string> params;  ///< resolved, defaults filled in
    std::string out;                            ///< CSV path, "-" for stdout, empty for none
};

/// Names of all commands, in help order.
const std::vector<std::string>& commands();

/// Documented keys (with defaults) for a command. Throws InvalidInput for an
/// unknown command.
const std::map<std::string, std::string>& command_keys(const std::string& command);

/// Fills defaults and rejects unknown keys.
ExperimentConfig make_config(const std::string& command, const std::map<std::string, std::string>& params,
                             std::string out = {});

/// Runs one command. The summary line goes to `out` (to `err` when the CSV
/// itself goes to stdout). Returns an ExitCode.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// argv entry point: `padicmv <command> [--key value ...]`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "PADICMV_OUTPUT_DIR";

}  // namespace padicmv::cli
