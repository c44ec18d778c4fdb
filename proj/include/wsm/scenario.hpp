#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wsm/report.hpp"

namespace wsm {

// The computational commands, written as "group action".
const std::vector<std::string>& scenario_commands();

// Validates a scenario config and fills in every default. Throws
// Error(invalid_argument) for unknown or inapplicable keys, missing required
// keys and malformed values; polynomial text errors surface as ParseError.
nlohmann::ordered_json resolve_config(const nlohmann::json& config);

// Runs a resolved config. The report embeds the resolved config under params.config.
Report run_scenario(const nlohmann::ordered_json& resolved);

}  // namespace wsm
