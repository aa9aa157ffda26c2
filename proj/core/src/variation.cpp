#include "matpg/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace matpg {

void MutationConfig::validate() const {
  const double probs[] = {p_team_add_edge,    p_team_del_edge,
                          p_team_mut_edge,    p_team_mut_action,
                          p_team_dest_change, p_team_dest_change_action,
                          p_action_add_edge,  p_action_del_edge,
                          p_action_mut_edge,  p_action_mut_act_edge,
                          p_action_swap_edges, p_program_add_line,
                          p_program_del_line, p_program_swap_lines,
                          p_program_mutate_constant};
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("mutation probability outside [0, 1]");
    }
  }
  if (init_program_size < 1) {
    throw std::invalid_argument("init_program_size must be >= 1");
  }
  if (max_program_size < 0) {
    throw std::invalid_argument("max_program_size must be >= 0 (0 = unbounded)");
  }
  if (observation_dim < 1) {
    throw std::invalid_argument("observation_dim must be >= 1");
  }
}

double mutate_constant(double c, RngStream& rng) {
  double result;
  switch (rng.index(3)) {
    case 0:
      result = c * rng.uniform(0.5, 2.0);
      break;
    case 1:
      result = -c;
      break;
    default:
      result = rng.uniform(-1.0, 1.0);
      break;
  }
  if (!std::isfinite(result)) {
    result = rng.uniform(-1.0, 1.0);
  }
  return result;
}

namespace {

OperandSource random_operand(RngStream& rng, const MutationConfig& cfg) {
  OperandSource src;
  if (rng.chance(0.5)) {
    src.kind = OperandSource::Kind::Register;
    src.index = static_cast<std::uint16_t>(rng.index(kRegisterCount));
  } else {
    src.kind = OperandSource::Kind::Observation;
    src.index = static_cast<std::uint16_t>(rng.index(cfg.observation_dim));
  }
  return src;
}

std::vector<int> unused_classes(const ActionVertex& av, int action_dim) {
  std::vector<bool> used(static_cast<std::size_t>(action_dim), false);
  for (const ActionEdge& edge : av.edges) {
    if (edge.action_class < action_dim) {
      used[edge.action_class] = true;
    }
  }
  std::vector<int> free_classes;
  for (int c = 0; c < action_dim; ++c) {
    if (!used[c]) {
      free_classes.push_back(c);
    }
  }
  return free_classes;
}

// Edges whose destination is an action vertex.
std::size_t count_action_edges(const Team& team, const VertexStore& store) {
  std::size_t n = 0;
  for (const TeamEdge& edge : team.edges) {
    if (!store.is_team(edge.destination)) {
      ++n;
    }
  }
  return n;
}

// Destination rule shared by edge addition and destination change: an
// action vertex of a live MAPLE root with probability
// p_team_dest_change_action, else a random team. Falls back across
// categories when one is empty; returns false when the store has no
// candidate at all.
bool draw_destination(RngStream& rng, const MutationConfig& cfg,
                      const VertexStore& store, VertexId& out, bool& out_is_team) {
  std::vector<VertexId> maple_vertices;
  for (const Root& root : store.roots()) {
    if (root.kind == AgentKind::Maple) {
      maple_vertices.push_back(root.vertex);
    }
  }
  const bool want_action = rng.chance(cfg.p_team_dest_change_action);
  if (want_action && !maple_vertices.empty()) {
    out = maple_vertices[rng.index(maple_vertices.size())];
    out_is_team = false;
    return true;
  }
  const std::vector<VertexId> teams = store.team_ids();
  if (!teams.empty()) {
    out = teams[rng.index(teams.size())];
    out_is_team = true;
    return true;
  }
  if (!maple_vertices.empty()) {
    out = maple_vertices[rng.index(maple_vertices.size())];
    out_is_team = false;
    return true;
  }
  return false;
}

}  // namespace

Instruction random_instruction(RngStream& rng, const MutationConfig& cfg) {
  Instruction instr;
  instr.op = static_cast<Opcode>(rng.index(kOpcodeCount));
  instr.dest = static_cast<std::uint8_t>(rng.index(kRegisterCount));
  instr.lhs = random_operand(rng, cfg);
  instr.rhs = random_operand(rng, cfg);
  instr.constant = rng.uniform(-1.0, 1.0);
  return instr;
}

Program random_program(RngStream& rng, const MutationConfig& cfg) {
  std::vector<Instruction> lines;
  lines.reserve(static_cast<std::size_t>(cfg.init_program_size));
  for (int i = 0; i < cfg.init_program_size; ++i) {
    lines.push_back(random_instruction(rng, cfg));
  }
  return Program(std::move(lines));
}

ActionVertex random_full_action_vertex(RngStream& rng, const MutationConfig& cfg,
                                       int action_dim) {
  ActionVertex av;
  av.edges.reserve(static_cast<std::size_t>(action_dim));
  for (int c = 0; c < action_dim; ++c) {
    av.edges.push_back(ActionEdge{random_program(rng, cfg), c});
  }
  return av;
}

namespace detail {

Program mutate_program_counted(const Program& program, RngStream& rng,
                               const MutationConfig& cfg, int& changes) {
  std::vector<Instruction> lines = program.lines();

  if (rng.chance(cfg.p_program_add_line)) {
    const bool at_cap = cfg.max_program_size > 0 &&
                        lines.size() >= static_cast<std::size_t>(cfg.max_program_size);
    if (!at_cap) {
      const std::size_t pos = rng.index(lines.size() + 1);
      lines.insert(lines.begin() + pos, random_instruction(rng, cfg));
      ++changes;
    }
  }
  if (rng.chance(cfg.p_program_del_line)) {
    if (lines.size() > 1) {
      lines.erase(lines.begin() + rng.index(lines.size()));
      ++changes;
    }
  }
  if (rng.chance(cfg.p_program_swap_lines)) {
    if (lines.size() >= 2) {
      const std::size_t i = rng.index(lines.size());
      std::size_t j = rng.index(lines.size() - 1);
      if (j >= i) {
        ++j;
      }
      std::swap(lines[i], lines[j]);
      ++changes;
    }
  }
  if (rng.chance(cfg.p_program_mutate_constant)) {
    Instruction& line = lines[rng.index(lines.size())];
    line.constant = mutate_constant(line.constant, rng);
    ++changes;
  }
  return Program(std::move(lines));
}

ActionVertex mutate_action_vertex_counted(const ActionVertex& av, RngStream& rng,
                                          const MutationConfig& cfg, int action_dim,
                                          int& changes) {
  ActionVertex out = av;

  if (rng.chance(cfg.p_action_add_edge)) {
    const std::vector<int> free_classes = unused_classes(out, action_dim);
    if (!free_classes.empty()) {
      const int cls = free_classes[rng.index(free_classes.size())];
      out.edges.push_back(ActionEdge{random_program(rng, cfg), cls});
      ++changes;
    }
  }
  if (rng.chance(cfg.p_action_del_edge)) {
    if (out.edges.size() > 1) {
      out.edges.erase(out.edges.begin() + rng.index(out.edges.size()));
      ++changes;
    }
  }
  if (rng.chance(cfg.p_action_mut_edge)) {
    ActionEdge& edge = out.edges[rng.index(out.edges.size())];
    edge.program = mutate_program_counted(edge.program, rng, cfg, changes);
  }
  if (rng.chance(cfg.p_action_mut_act_edge)) {
    const std::vector<int> free_classes = unused_classes(out, action_dim);
    if (!free_classes.empty()) {
      ActionEdge& edge = out.edges[rng.index(out.edges.size())];
      edge.action_class = free_classes[rng.index(free_classes.size())];
      ++changes;
    }
  }
  if (rng.chance(cfg.p_action_swap_edges)) {
    if (out.edges.size() >= 2) {
      const std::size_t i = rng.index(out.edges.size());
      std::size_t j = rng.index(out.edges.size() - 1);
      if (j >= i) {
        ++j;
      }
      std::swap(out.edges[i].action_class, out.edges[j].action_class);
      ++changes;
    }
  }
  return out;
}

Team mutate_team_counted(const Team& team, RngStream& rng, const MutationConfig& cfg,
                         VertexStore& store, int action_dim, int& changes) {
  Team out = team;

  if (rng.chance(cfg.p_team_add_edge)) {
    VertexId dest = 0;
    bool dest_is_team = false;
    if (draw_destination(rng, cfg, store, dest, dest_is_team)) {
      out.edges.push_back(TeamEdge{random_program(rng, cfg), dest});
      ++changes;
    }
  }
  if (rng.chance(cfg.p_team_del_edge)) {
    if (out.edges.size() > 2) {
      const std::size_t victim = rng.index(out.edges.size());
      const bool victim_is_action = !store.is_team(out.edges[victim].destination);
      const bool last_action_edge =
          victim_is_action && count_action_edges(out, store) == 1;
      if (!last_action_edge) {
        out.edges.erase(out.edges.begin() + victim);
        ++changes;
      }
    }
  }
  if (rng.chance(cfg.p_team_mut_edge)) {
    const std::size_t pick = rng.index(out.edges.size());
    TeamEdge& edge = out.edges[pick];
    if (rng.chance(cfg.p_team_dest_change)) {
      VertexId dest = 0;
      bool dest_is_team = false;
      if (draw_destination(rng, cfg, store, dest, dest_is_team)) {
        const bool edge_is_action = !store.is_team(edge.destination);
        const bool would_drop_last_action =
            dest_is_team && edge_is_action && count_action_edges(out, store) == 1;
        if (!would_drop_last_action && dest != edge.destination) {
          edge.destination = dest;
          ++changes;
        }
      }
    } else if (!store.is_team(edge.destination) && rng.chance(cfg.p_team_mut_action)) {
      // Copy-on-write: mutate a private copy so siblings referencing the
      // original action vertex keep their behavior.
      int inner_changes = 0;
      ActionVertex copy = mutate_action_vertex_counted(
          store.action_vertex(edge.destination), rng, cfg, action_dim, inner_changes);
      if (inner_changes > 0) {
        edge.destination = store.add_action_vertex(std::move(copy));
        changes += inner_changes;
      }
    } else {
      edge.program = mutate_program_counted(edge.program, rng, cfg, changes);
    }
  }
  return out;
}

}  // namespace detail

Program mutate_program(const Program& program, RngStream& rng,
                       const MutationConfig& cfg) {
  int changes = 0;
  return detail::mutate_program_counted(program, rng, cfg, changes);
}

ActionVertex mutate_action_vertex(const ActionVertex& av, RngStream& rng,
                                  const MutationConfig& cfg, int action_dim) {
  int changes = 0;
  return detail::mutate_action_vertex_counted(av, rng, cfg, action_dim, changes);
}

Team mutate_team(const Team& team, RngStream& rng, const MutationConfig& cfg,
                 VertexStore& store, int action_dim) {
  int changes = 0;
  return detail::mutate_team_counted(team, rng, cfg, store, action_dim, changes);
}

Root clone_root(const Root& root, VertexStore& store) {
  Root child = root;
  if (root.kind == AgentKind::Matpg) {
    child.vertex = store.add_team(store.team(root.vertex));
  } else {
    child.vertex = store.add_action_vertex(store.action_vertex(root.vertex));
  }
  store.add_root(child);
  return child;
}

Root spawn_offspring(const Root& parent, VertexStore& store, RngStream& rng,
                     const MutationConfig& cfg, int action_dim) {
  const Root child = clone_root(parent, store);
  // Repeat until the offspring differs structurally from its parent. The
  // cap only matters for degenerate all-zero-probability configs.
  constexpr int kMaxAttempts = 1000;
  int changes = 0;
  for (int attempt = 0; attempt < kMaxAttempts && changes == 0; ++attempt) {
    if (child.kind == AgentKind::Matpg) {
      Team mutated = detail::mutate_team_counted(store.team(child.vertex), rng, cfg,
                                                 store, action_dim, changes);
      if (changes > 0) {
        store.replace_team(child.vertex, std::move(mutated));
      }
    } else {
      ActionVertex mutated = detail::mutate_action_vertex_counted(
          store.action_vertex(child.vertex), rng, cfg, action_dim, changes);
      if (changes > 0) {
        store.replace_action_vertex(child.vertex, std::move(mutated));
      }
    }
  }
  return child;
}

}  // namespace matpg
