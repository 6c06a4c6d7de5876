#pragma once

#include <filesystem>
#include <json.hpp>

#include "kg/sim3d.hpp"

namespace kg {

/// Validates a SimConfig document and fills in defaults.  Unknown keys,
/// wrong types and out-of-range values raise ConfigError naming the key.
SimConfig sim_config_from_json(const nlohmann::json& doc);

/// Every key with its value; sim_config_from_json(to_json(c)) == c.
nlohmann::json to_json(const SimConfig& cfg);

SimConfig load_sim_config(const std::filesystem::path& path);

bool operator==(const SimConfig& a, const SimConfig& b);

}  // namespace kg
