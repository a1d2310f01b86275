#pragma once

// CLI11 glue shared by parse_config and the command-line tool.

#include <CLI11.hpp>

#include "raris/config.hpp"

namespace raris {

/// Option handles needed after parsing (to detect fields that were never set).
struct ExperimentOptions {
    CLI::Option* a = nullptr;
    CLI::Option* k = nullptr;
    std::string method = "atis";
    std::string tilt_mode = "exact";
    std::string ci_mode = "closed";
    std::string endpoint_sampling = "mixture";
};

/// Registers the experiment flags on `app`, writing into `cfg`. Adds
/// `--config` as a flat key = value file.
void add_experiment_options(CLI::App& app, ExperimentConfig& cfg, ExperimentOptions& opts,
                            bool with_method = true);

/// Converts the string-valued modes, checks required fields and bounds.
/// `k_optional` is for commands that scan k themselves.
void finalize_experiment(ExperimentConfig& cfg, const ExperimentOptions& opts,
                         bool require_k = false, bool k_optional = false);

}  // namespace raris
