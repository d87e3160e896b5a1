#pragma once

#include "polykin/config.hpp"

#include <json.hpp>

#include <string>

namespace polykin {

/// Execute the configured run and write its artifacts into out_dir:
/// metadata.json (config echo, dimensionless groups, seed, wall clock),
/// summary.json (scenario-specific results), and the CSV outputs of the
/// selected solver. Returns the summary. Throws ConfigError for semantic
/// problems and std::runtime_error for solver failures.
nlohmann::json run_scenario(const RunConfig& cfg, const std::string& out_dir);

} // namespace polykin
