// gapsol: experiment configuration — JSON schema, validation with
// unknown-key rejection, defaults, serialization.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gapsol/run.hpp"

namespace gapsol {

struct AnalysisRequest {
    std::string op;
    std::string name;
    nlohmann::json args; // op-specific arguments, validated at parse time
};

struct OutputOptions {
    std::string dir;                // empty: decided by the CLI
    bool binary_snapshots = false;
};

struct ExperimentConfig {
    SimulationConfig sim;
    std::vector<AnalysisRequest> analysis;
    OutputOptions output;
};

// Parse + validate. Errors name the offending field and constraint; JSON
// syntax errors carry line/column.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const nlohmann::json& j);

nlohmann::json serialize_config(const ExperimentConfig& cfg);
bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b);

// Cross-module validation: builds the grid/profile, resolves xi0, checks the
// schedule. Throws ConfigError on any inconsistency.
void validate_config(const ExperimentConfig& cfg);

} // namespace gapsol
