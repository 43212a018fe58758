#pragma once

#include "awf/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace awf {

enum ExitStatus : int { exit_pass = 0, exit_error = 1, exit_fail = 2 };

const std::vector<std::string>& subcommand_names();

/// Report document plus optional per-point CSV text. `report["pass"]` holds the verdict.
struct Experiment {
    Json report;
    std::string csv;
};

/// Runs one subcommand without touching the filesystem. The report carries
/// schema, subcommand, the resolved config, results, pass and metadata.timestamp.
Experiment run_experiment(const std::string& name, const ExperimentConfig& config);

struct RunResult {
    int status = exit_error;
    Json report;
    std::vector<std::filesystem::path> files;
};

/// run_experiment, then writes <dir>/<name>.json (and .csv when enabled). `dir`
/// defaults to config.out_dir; an override is recorded as metadata.output_dir only,
/// so the embedded config stays as written.
RunResult run_subcommand(const std::string& name, const ExperimentConfig& config,
                         const std::optional<std::string>& out_dir = std::nullopt);

/// Equality of two reports with the metadata block (timestamp, output directory) removed.
bool reports_equal(const Json& a, const Json& b);

}  // namespace awf
