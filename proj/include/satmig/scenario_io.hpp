#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "satmig/scenario.hpp"

namespace satmig {

/// Parses and validates a scenario document, filling defaults for every
/// optional field. Unknown keys are ignored. Errors are ConfigError with the
/// offending field path in the message.
Scenario parse_scenario(const nlohmann::json& doc);

Scenario load_scenario(const std::filesystem::path& path);

/// Full serialization, defaults included; parse_scenario(to_json(s)) == s.
nlohmann::json to_json(const Scenario& scenario);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace satmig
