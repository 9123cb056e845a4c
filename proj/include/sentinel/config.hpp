#pragma once

#include "sentinel/coordinator.hpp"
#include "sentinel/ingest.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace sentinel::cli {

/// Everything a run needs. Only `p` (correlation window) and `thd_pos` are
/// expected user knobs; the rest default to the detector's standard values.
struct RunConfig {
    ingest::SourceConfig source;
    std::size_t p = 2880;
    double thd_pos = 0.95;
    std::size_t window = 1440;       // W
    std::size_t hidden_size = 10;
    std::size_t max_epochs = 50;
    double learning_rate = 0.005;
    std::uint64_t seed = 140;
    std::string out_reports;          // empty: stdout
    std::string out_trace;            // empty: no trace
    bool parallel = true;
};

/// Collects every violation instead of stopping at the first.
std::vector<std::string> validate(const RunConfig& cfg);

/// Applies settings from a JSON object file; unknown keys are rejected.
void apply_config_file(RunConfig& cfg, const std::string& path);

nlohmann::json effective_config(const RunConfig& cfg);

fuse::CoordinatorConfig coordinator_config(const RunConfig& cfg, std::size_t n_variables);

} // namespace sentinel::cli
