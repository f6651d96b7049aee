#pragma once

#include <map>
#include <optional>
#include <string>

#include "quantomc/calibration.hpp"
#include "quantomc/greeks.hpp"

namespace qmc {

enum class Command { Price, Sweep, Greeks, Calibrate };

std::string to_string(Command command);

/// Command-line inputs feeding parse_config. Flags override file values.
struct CliOptions {
    Command command = Command::Price;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::string> out_dir;
    std::optional<std::string> dump_paths;  // price only
};

/// Fully resolved run: every default made explicit. `echo` holds the
/// key=value view written to the manifest and the log.
struct RunConfig {
    Command command = Command::Price;
    CaseTag case_tag = CaseTag::Case1;
    MarketSnapshot market;
    ModelSpec model;
    SimConfig sim;
    CorrBumpSpec greeks;
    std::string out_dir = "out";
    std::optional<std::string> dump_paths;
    std::optional<CalibrationWindow> calibration;  // set when [data] was used
    std::map<std::string, std::string> data_files; // instrument -> csv path
    RateConstants rates;
    std::vector<std::string> notes;                // calibration diagnostics
    std::map<std::string, std::string> echo;
};

/// Reads the INI-style config file (flat key = value lines under [section]
/// headers), applies flag overrides, runs calibration when a [data] section
/// is present, validates everything, and resolves every default.
///
/// Throws ConfigError for schema problems and DataError for CSV problems.
RunConfig parse_config(const CliOptions& options);

/// Dispatches a resolved run and writes its artifacts (and a manifest
/// sufficient to reproduce the run) under config.out_dir.
/// Returns the process exit code: 0 success, 2 config error, 3 data error,
/// 4 numerical failure of a non-sweep command.
int run(const RunConfig& config);

}  // namespace qmc
