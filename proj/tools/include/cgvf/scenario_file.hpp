#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cgvf/sim.hpp"

namespace cgvf {

/// Output switches carried alongside a scenario in its file.
struct OutputOptions {
  bool plots = true;
  bool csv = true;
};

struct ScenarioDocument {
  Scenario scenario;
  OutputOptions outputs;
};

/// Validates the JSON document and builds a Scenario. Throws ScenarioError
/// listing every violation by key path (e.g. "gains.k_c: must be > 0").
ScenarioDocument parse_scenario(const nlohmann::json& doc);
ScenarioDocument parse_scenario_text(const std::string& text);
ScenarioDocument load_scenario_file(const std::filesystem::path& file);

/// Explicit form of a scenario (paths as term lists, explicit edges and w*);
/// parse_scenario(serialize_scenario(s)) reproduces s.
nlohmann::json serialize_scenario(const Scenario& sc, const OutputOptions& outputs = {});

}  // namespace cgvf
