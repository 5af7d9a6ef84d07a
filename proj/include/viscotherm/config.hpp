#pragma once

#include <string>

#include "json.hpp"
#include "viscotherm/solver.hpp"

namespace viscotherm {

/// A parsed run configuration plus its fully resolved echo (defaults filled
/// in, preset parameters spelled out). The echo reparses to the same
/// configuration; manifests embed it so stored runs can be re-audited.
struct LoadedConfig {
  SimulationConfig sim;
  nlohmann::json echo;
};

/// Parses and resolves a configuration object. Throws ConfigError with a
/// field path on malformed or out-of-range input.
LoadedConfig load_config_json(const nlohmann::json& j);

/// Reads and parses a JSON config file.
LoadedConfig load_config_file(const std::string& path);

}  // namespace viscotherm
