#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "longbond/cli/config.hpp"

namespace longbond::cli {

// Exit-code contract shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

/// Command-line overrides applied on top of the config file.
struct Overrides {
    std::optional<OutputFormat> format;
    std::optional<std::string> output_path;
    std::optional<std::uint64_t> seed;
};

int cmd_curve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_regime(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_longbond(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Loads the config, applies overrides, dispatches `command`, and routes the
/// report to the configured output path (or `out` when none). Maps errors to
/// the exit-code contract and prints diagnostics on `err`.
int run_command(const std::string& command, const std::string& config_path,
                const Overrides& overrides, std::ostream& out, std::ostream& err);

} // namespace longbond::cli
