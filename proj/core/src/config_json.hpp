#pragma once

// Internal JSON (de)serialization for config structs; shared by checkpoints
// and the run-config loader. Not installed.

#include <json.hpp>

#include "matpg/evolution.hpp"
#include "matpg/point_mass.hpp"

namespace matpg {

nlohmann::json selection_to_json(const SelectionConfig& cfg);
SelectionConfig selection_from_json(const nlohmann::json& j);

nlohmann::json mutation_to_json(const MutationConfig& cfg);
MutationConfig mutation_from_json(const nlohmann::json& j);

nlohmann::json evolution_to_json(const EvolutionConfig& cfg);
EvolutionConfig evolution_from_json(const nlohmann::json& j);

nlohmann::json point_mass_to_json(const PointMassConfig& cfg);
PointMassConfig point_mass_from_json(const nlohmann::json& j);

}  // namespace matpg
