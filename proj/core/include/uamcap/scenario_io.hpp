#pragma once

#include <filesystem>
#include <string>

#include "uamcap/airspace.hpp"

namespace uam {

/// A replayable snapshot of one episode's world, as structured text with
/// documented field names in SI units. Round-trips exactly (doubles are
/// written shortest round-trip).
std::string scenario_to_json(const EnvInstance& env);
EnvInstance scenario_from_json(const std::string& text);

void save_scenario(const EnvInstance& env, const std::filesystem::path& path);
EnvInstance load_scenario(const std::filesystem::path& path);

}  // namespace uam
