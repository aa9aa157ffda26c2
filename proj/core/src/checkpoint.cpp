#include "matpg/checkpoint.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config_json.hpp"
#include "matpg/text.hpp"

namespace matpg {

using nlohmann::json;

namespace {
constexpr int kFormatVersion = 1;

template <class T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw CheckpointError(std::string("checkpoint missing field: ") + key);
  }
  return j.at(key).get<T>();
}
}  // namespace

json selection_to_json(const SelectionConfig& cfg) {
  return json{
      {"method",
       cfg.method == SelectionConfig::Method::Tournament ? "tournament" : "lexicase"},
      {"elite_proportion", cfg.elite_proportion},
      {"tournament_size", cfg.tournament_size},
      {"survivor_proportion", cfg.survivor_proportion},
      {"epsilon_coefficient", cfg.epsilon_coefficient},
  };
}

SelectionConfig selection_from_json(const json& j) {
  SelectionConfig cfg;
  const auto method = j.value("method", "tournament");
  if (method == "tournament") {
    cfg.method = SelectionConfig::Method::Tournament;
  } else if (method == "lexicase") {
    cfg.method = SelectionConfig::Method::Lexicase;
  } else {
    throw CheckpointError("unknown selection method: " + std::string(method));
  }
  cfg.elite_proportion = j.value("elite_proportion", cfg.elite_proportion);
  cfg.tournament_size = j.value("tournament_size", cfg.tournament_size);
  cfg.survivor_proportion = j.value("survivor_proportion", cfg.survivor_proportion);
  cfg.epsilon_coefficient = j.value("epsilon_coefficient", cfg.epsilon_coefficient);
  return cfg;
}

json mutation_to_json(const MutationConfig& cfg) {
  return json{
      {"p_team_add_edge", cfg.p_team_add_edge},
      {"p_team_del_edge", cfg.p_team_del_edge},
      {"p_team_mut_edge", cfg.p_team_mut_edge},
      {"p_team_mut_action", cfg.p_team_mut_action},
      {"p_team_dest_change", cfg.p_team_dest_change},
      {"p_team_dest_change_action", cfg.p_team_dest_change_action},
      {"p_action_add_edge", cfg.p_action_add_edge},
      {"p_action_del_edge", cfg.p_action_del_edge},
      {"p_action_mut_edge", cfg.p_action_mut_edge},
      {"p_action_mut_act_edge", cfg.p_action_mut_act_edge},
      {"p_action_swap_edges", cfg.p_action_swap_edges},
      {"p_program_add_line", cfg.p_program_add_line},
      {"p_program_del_line", cfg.p_program_del_line},
      {"p_program_swap_lines", cfg.p_program_swap_lines},
      {"p_program_mutate_constant", cfg.p_program_mutate_constant},
      {"init_program_size", cfg.init_program_size},
      {"max_program_size", cfg.max_program_size},
  };
}

MutationConfig mutation_from_json(const json& j) {
  MutationConfig cfg;
  cfg.p_team_add_edge = j.value("p_team_add_edge", cfg.p_team_add_edge);
  cfg.p_team_del_edge = j.value("p_team_del_edge", cfg.p_team_del_edge);
  cfg.p_team_mut_edge = j.value("p_team_mut_edge", cfg.p_team_mut_edge);
  cfg.p_team_mut_action = j.value("p_team_mut_action", cfg.p_team_mut_action);
  cfg.p_team_dest_change = j.value("p_team_dest_change", cfg.p_team_dest_change);
  cfg.p_team_dest_change_action =
      j.value("p_team_dest_change_action", cfg.p_team_dest_change_action);
  cfg.p_action_add_edge = j.value("p_action_add_edge", cfg.p_action_add_edge);
  cfg.p_action_del_edge = j.value("p_action_del_edge", cfg.p_action_del_edge);
  cfg.p_action_mut_edge = j.value("p_action_mut_edge", cfg.p_action_mut_edge);
  cfg.p_action_mut_act_edge = j.value("p_action_mut_act_edge", cfg.p_action_mut_act_edge);
  cfg.p_action_swap_edges = j.value("p_action_swap_edges", cfg.p_action_swap_edges);
  cfg.p_program_add_line = j.value("p_program_add_line", cfg.p_program_add_line);
  cfg.p_program_del_line = j.value("p_program_del_line", cfg.p_program_del_line);
  cfg.p_program_swap_lines = j.value("p_program_swap_lines", cfg.p_program_swap_lines);
  cfg.p_program_mutate_constant =
      j.value("p_program_mutate_constant", cfg.p_program_mutate_constant);
  cfg.init_program_size = j.value("init_program_size", cfg.init_program_size);
  cfg.max_program_size = j.value("max_program_size", cfg.max_program_size);
  return cfg;
}

json evolution_to_json(const EvolutionConfig& cfg) {
  return json{
      {"n_agents", cfg.n_agents},
      {"maple_proportion", cfg.maple_proportion},
      {"n_generations", cfg.n_generations},
      {"train_episodes_per_task", cfg.train_episodes_per_task},
      {"valid_episodes_per_task", cfg.valid_episodes_per_task},
      {"valid_combined_episodes", cfg.valid_combined_episodes},
      {"validation_frequency", cfg.validation_frequency},
      {"selection", selection_to_json(cfg.selection)},
      {"mutation", mutation_to_json(cfg.mutation)},
      {"seed", cfg.seed},
      {"workers", cfg.workers},
  };
}

EvolutionConfig evolution_from_json(const json& j) {
  EvolutionConfig cfg;
  cfg.n_agents = j.value("n_agents", cfg.n_agents);
  cfg.maple_proportion = j.value("maple_proportion", cfg.maple_proportion);
  cfg.n_generations = j.value("n_generations", cfg.n_generations);
  cfg.train_episodes_per_task =
      j.value("train_episodes_per_task", cfg.train_episodes_per_task);
  cfg.valid_episodes_per_task =
      j.value("valid_episodes_per_task", cfg.valid_episodes_per_task);
  cfg.valid_combined_episodes =
      j.value("valid_combined_episodes", cfg.valid_combined_episodes);
  cfg.validation_frequency = j.value("validation_frequency", cfg.validation_frequency);
  if (j.contains("selection")) {
    cfg.selection = selection_from_json(j.at("selection"));
  }
  if (j.contains("mutation")) {
    cfg.mutation = mutation_from_json(j.at("mutation"));
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.workers = j.value("workers", cfg.workers);
  return cfg;
}

json point_mass_to_json(const PointMassConfig& cfg) {
  json bands_lo = json::array();
  json bands_hi = json::array();
  for (int t = 0; t < kPointMassTaskCount; ++t) {
    bands_lo.push_back(cfg.posture_band_lo[t]);
    bands_hi.push_back(cfg.posture_band_hi[t]);
  }
  return json{
      {"dt", cfg.dt},
      {"section_length", cfg.section_length},
      {"zone_center_lo", cfg.zone_center_lo},
      {"zone_center_hi", cfg.zone_center_hi},
      {"zone_half_width", cfg.zone_half_width},
      {"top_speed", cfg.top_speed},
      {"progress_reward_scale", cfg.progress_reward_scale},
      {"completion_bonus", cfg.completion_bonus},
      {"max_steps", cfg.max_steps},
      {"action_dim", cfg.action_dim},
      {"posture_band_lo", bands_lo},
      {"posture_band_hi", bands_hi},
      {"key_required_steps", cfg.key_required_steps},
      {"wrong_key_limit", cfg.wrong_key_limit},
      {"brake_speed_cap", cfg.brake_speed_cap},
      {"oscillate_ref_speed", cfg.oscillate_ref_speed},
      {"oscillate_tolerance", cfg.oscillate_tolerance},
      {"oscillate_half_period", cfg.oscillate_half_period},
      {"oscillate_required_steps", cfg.oscillate_required_steps},
      {"oscillate_violation_limit", cfg.oscillate_violation_limit},
      {"reverse_backout_margin", cfg.reverse_backout_margin},
      {"hold_speed_limit", cfg.hold_speed_limit},
      {"hold_required_steps", cfg.hold_required_steps},
  };
}

PointMassConfig point_mass_from_json(const json& j) {
  PointMassConfig cfg;
  cfg.dt = j.value("dt", cfg.dt);
  cfg.section_length = j.value("section_length", cfg.section_length);
  cfg.zone_center_lo = j.value("zone_center_lo", cfg.zone_center_lo);
  cfg.zone_center_hi = j.value("zone_center_hi", cfg.zone_center_hi);
  cfg.zone_half_width = j.value("zone_half_width", cfg.zone_half_width);
  cfg.top_speed = j.value("top_speed", cfg.top_speed);
  cfg.progress_reward_scale = j.value("progress_reward_scale", cfg.progress_reward_scale);
  cfg.completion_bonus = j.value("completion_bonus", cfg.completion_bonus);
  cfg.max_steps = j.value("max_steps", cfg.max_steps);
  cfg.action_dim = j.value("action_dim", cfg.action_dim);
  if (j.contains("posture_band_lo")) {
    const auto& lo = j.at("posture_band_lo");
    const auto& hi = j.at("posture_band_hi");
    for (int t = 0; t < kPointMassTaskCount; ++t) {
      cfg.posture_band_lo[t] = lo.at(t).get<double>();
      cfg.posture_band_hi[t] = hi.at(t).get<double>();
    }
  }
  cfg.key_required_steps = j.value("key_required_steps", cfg.key_required_steps);
  cfg.wrong_key_limit = j.value("wrong_key_limit", cfg.wrong_key_limit);
  cfg.brake_speed_cap = j.value("brake_speed_cap", cfg.brake_speed_cap);
  cfg.oscillate_ref_speed = j.value("oscillate_ref_speed", cfg.oscillate_ref_speed);
  cfg.oscillate_tolerance = j.value("oscillate_tolerance", cfg.oscillate_tolerance);
  cfg.oscillate_half_period = j.value("oscillate_half_period", cfg.oscillate_half_period);
  cfg.oscillate_required_steps =
      j.value("oscillate_required_steps", cfg.oscillate_required_steps);
  cfg.oscillate_violation_limit =
      j.value("oscillate_violation_limit", cfg.oscillate_violation_limit);
  cfg.reverse_backout_margin = j.value("reverse_backout_margin", cfg.reverse_backout_margin);
  cfg.hold_speed_limit = j.value("hold_speed_limit", cfg.hold_speed_limit);
  cfg.hold_required_steps = j.value("hold_required_steps", cfg.hold_required_steps);
  return cfg;
}

namespace {

json program_to_json(const Program& program) {
  json lines = json::array();
  for (const Instruction& line : program.lines()) {
    lines.push_back(instruction_to_text(line));
  }
  return lines;
}

Program program_from_json(const json& j) {
  std::vector<Instruction> lines;
  for (const auto& line : j) {
    lines.push_back(instruction_from_text(line.get<std::string>()));
  }
  return Program(std::move(lines));
}

json store_to_json(const VertexStore& store) {
  json vertices = json::array();
  for (const auto& [id, vertex] : store.vertices()) {
    json entry;
    entry["id"] = id;
    if (const Team* team = std::get_if<Team>(&vertex)) {
      entry["kind"] = "team";
      json edges = json::array();
      for (const TeamEdge& edge : team->edges) {
        edges.push_back(json{{"dest", edge.destination},
                             {"program", program_to_json(edge.program)}});
      }
      entry["edges"] = std::move(edges);
    } else {
      entry["kind"] = "action";
      json edges = json::array();
      for (const ActionEdge& edge : std::get<ActionVertex>(vertex).edges) {
        edges.push_back(json{{"class", edge.action_class},
                             {"program", program_to_json(edge.program)}});
      }
      entry["edges"] = std::move(edges);
    }
    vertices.push_back(std::move(entry));
  }
  return json{{"next_id", store.next_id()}, {"vertices", std::move(vertices)}};
}

}  // namespace

std::string checkpoint_to_json(const EngineState& state) {
  json root;
  root["format"] = "matpg-checkpoint";
  root["version"] = kFormatVersion;
  root["generation"] = state.generation;
  root["config"] = evolution_to_json(state.config);
  root["store"] = store_to_json(state.store);
  json maple = json::array();
  for (const Root& r : state.maple_roots) {
    maple.push_back(r.vertex);
  }
  json matpg = json::array();
  for (const Root& r : state.matpg_roots) {
    matpg.push_back(r.vertex);
  }
  root["maple_roots"] = std::move(maple);
  root["matpg_roots"] = std::move(matpg);
  return root.dump(1);
}

EngineState checkpoint_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint parse failure: ") + e.what());
  }
  try {
    if (require<std::string>(root, "format") != "matpg-checkpoint") {
      throw CheckpointError("not a matpg checkpoint file");
    }
    if (require<int>(root, "version") != kFormatVersion) {
      throw CheckpointError("unsupported checkpoint version");
    }
    EngineState state;
    state.generation = require<int>(root, "generation");
    state.config = evolution_from_json(root.at("config"));

    const json& store_json = root.at("store");
    std::map<VertexId, Vertex> vertices;
    for (const auto& entry : store_json.at("vertices")) {
      const auto id = entry.at("id").get<VertexId>();
      const auto kind = entry.at("kind").get<std::string>();
      if (kind == "team") {
        Team team;
        for (const auto& edge : entry.at("edges")) {
          team.edges.push_back(TeamEdge{program_from_json(edge.at("program")),
                                        edge.at("dest").get<VertexId>()});
        }
        vertices.emplace(id, std::move(team));
      } else if (kind == "action") {
        ActionVertex av;
        for (const auto& edge : entry.at("edges")) {
          av.edges.push_back(ActionEdge{program_from_json(edge.at("program")),
                                        edge.at("class").get<int>()});
        }
        vertices.emplace(id, std::move(av));
      } else {
        throw CheckpointError("unknown vertex kind: " + kind);
      }
    }

    std::vector<Root> roots;
    for (const auto& id : root.at("maple_roots")) {
      state.maple_roots.push_back(Root{AgentKind::Maple, id.get<VertexId>()});
    }
    for (const auto& id : root.at("matpg_roots")) {
      state.matpg_roots.push_back(Root{AgentKind::Matpg, id.get<VertexId>()});
    }
    roots = state.maple_roots;
    roots.insert(roots.end(), state.matpg_roots.begin(), state.matpg_roots.end());
    state.store.restore(std::move(vertices), std::move(roots),
                        require<std::uint64_t>(store_json, "next_id"));
    return state;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const EngineState& state, const std::string& path) {
  const std::string payload = checkpoint_to_json(state);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw CheckpointError("cannot open checkpoint file for writing: " + tmp);
    }
    out << payload << '\n';
    if (!out.good()) {
      throw CheckpointError("checkpoint write failure: " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

EngineState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError("cannot open checkpoint file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return checkpoint_from_json(buffer.str());
}

}  // namespace matpg
