#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vslsim/engine.hpp"

namespace vsl {

// Parses the single-document JSON scenario config; errors name the offending
// key path. See configs/ for the bundled scenarios and README for the schema.
ScenarioConfig parse_scenario_config(const nlohmann::json& j);

struct LoadedConfig {
  ScenarioConfig scenario;
  std::string hash;  // FNV-1a of the canonical JSON document
};

LoadedConfig load_scenario_config(const std::filesystem::path& path);

}  // namespace vsl
