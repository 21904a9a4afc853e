#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>

#include "occsim/sim.hpp"

namespace occ::detail {

// `doc` holds optional "model", "world" and "scenario" objects. Relative
// paths resolve against base_dir. An empty base_dir means the embedded data.
ScenarioDocument scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                    const std::string& where);

nlohmann::json parse_json(const std::string& text, const std::string& where);

}  // namespace occ::detail
