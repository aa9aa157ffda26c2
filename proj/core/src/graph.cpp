#include "matpg/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace matpg {

namespace {

void check_team_invariants(const Team& team, const VertexStore& store) {
  if (team.edges.size() < 2) {
    throw StructuralError("team must keep at least two edges");
  }
  bool has_action_edge = false;
  for (const TeamEdge& edge : team.edges) {
    if (!store.contains(edge.destination)) {
      throw StructuralError("team edge destination does not resolve");
    }
    has_action_edge |= !store.is_team(edge.destination);
  }
  if (!has_action_edge) {
    throw StructuralError("team must keep at least one action-vertex edge");
  }
}

void check_action_vertex_invariants(const ActionVertex& av) {
  if (av.edges.empty()) {
    throw StructuralError("action vertex must keep at least one edge");
  }
  std::set<int> classes;
  for (const ActionEdge& edge : av.edges) {
    if (edge.action_class < 0) {
      throw StructuralError("negative action class");
    }
    if (!classes.insert(edge.action_class).second) {
      throw StructuralError("duplicate action class on action vertex");
    }
  }
}

}  // namespace

VertexId VertexStore::add_team(Team team) {
  check_team_invariants(team, *this);
  const VertexId id = next_id_++;
  vertices_.emplace(id, std::move(team));
  return id;
}

VertexId VertexStore::add_action_vertex(ActionVertex av) {
  check_action_vertex_invariants(av);
  const VertexId id = next_id_++;
  vertices_.emplace(id, std::move(av));
  return id;
}

void VertexStore::replace_team(VertexId id, Team team) {
  check_team_invariants(team, *this);
  auto it = vertices_.find(id);
  if (it == vertices_.end() || !std::holds_alternative<Team>(it->second)) {
    throw StructuralError("replace_team target is not a team");
  }
  it->second = std::move(team);
}

void VertexStore::replace_action_vertex(VertexId id, ActionVertex av) {
  check_action_vertex_invariants(av);
  auto it = vertices_.find(id);
  if (it == vertices_.end() || !std::holds_alternative<ActionVertex>(it->second)) {
    throw StructuralError("replace_action_vertex target is not an action vertex");
  }
  it->second = std::move(av);
}

bool VertexStore::is_team(VertexId id) const {
  return std::holds_alternative<Team>(vertex(id));
}

const Vertex& VertexStore::vertex(VertexId id) const {
  auto it = vertices_.find(id);
  if (it == vertices_.end()) {
    throw StructuralError("vertex id not in store: " + std::to_string(id));
  }
  return it->second;
}

const Team& VertexStore::team(VertexId id) const {
  const Vertex& v = vertex(id);
  if (const Team* t = std::get_if<Team>(&v)) {
    return *t;
  }
  throw StructuralError("vertex is not a team: " + std::to_string(id));
}

const ActionVertex& VertexStore::action_vertex(VertexId id) const {
  const Vertex& v = vertex(id);
  if (const ActionVertex* av = std::get_if<ActionVertex>(&v)) {
    return *av;
  }
  throw StructuralError("vertex is not an action vertex: " + std::to_string(id));
}

std::vector<VertexId> VertexStore::team_ids() const {
  std::vector<VertexId> ids;
  for (const auto& [id, vertex] : vertices_) {
    if (std::holds_alternative<Team>(vertex)) {
      ids.push_back(id);
    }
  }
  return ids;
}

void VertexStore::add_root(Root root) {
  if (!contains(root.vertex)) {
    throw StructuralError("root vertex not in store");
  }
  const bool is_team_vertex = is_team(root.vertex);
  if (is_team_vertex != (root.kind == AgentKind::Matpg)) {
    throw StructuralError("root kind does not match its vertex type");
  }
  roots_.push_back(root);
}

void VertexStore::set_roots(std::vector<Root> roots) {
  roots_.clear();
  for (Root& r : roots) {
    add_root(r);
  }
}

std::size_t VertexStore::gc() {
  std::set<VertexId> live;
  for (const Root& root : roots_) {
    for (VertexId id : reachable_set(root.vertex, *this)) {
      live.insert(id);
    }
  }
  const std::size_t removed =
      std::erase_if(vertices_, [&](const auto& entry) { return live.count(entry.first) == 0; });
  return removed;
}

bool VertexStore::consistent() const {
  for (const auto& [id, vertex] : vertices_) {
    if (const Team* t = std::get_if<Team>(&vertex)) {
      for (const TeamEdge& edge : t->edges) {
        if (!contains(edge.destination)) {
          return false;
        }
      }
    }
  }
  for (const Root& root : roots_) {
    if (!contains(root.vertex)) {
      return false;
    }
  }
  return true;
}

void VertexStore::restore(std::map<VertexId, Vertex> vertices, std::vector<Root> roots,
                          std::uint64_t next_id) {
  vertices_ = std::move(vertices);
  next_id_ = next_id;
  set_roots(std::move(roots));
  if (!consistent()) {
    throw StructuralError("restored store has dangling edges");
  }
}

VertexId route_team(const Team& team, std::span<const double> observation,
                    std::span<const VertexId> visited) {
  VertexId best = 0;
  double best_bid = 0.0;
  bool found = false;
  for (const TeamEdge& edge : team.edges) {
    if (std::find(visited.begin(), visited.end(), edge.destination) != visited.end()) {
      continue;
    }
    const double bid = sanitize_bid(execute_program(edge.program, observation));
    if (!found || bid > best_bid) {
      found = true;
      best_bid = bid;
      best = edge.destination;
    }
  }
  if (!found) {
    // Unreachable while team invariants hold: action vertices never enter
    // the visited set.
    throw StructuralError("team has no routable edge");
  }
  return best;
}

void emit_actions_into(const ActionVertex& av, std::span<const double> observation,
                       std::span<double> out, double default_action) {
  std::fill(out.begin(), out.end(), default_action);
  for (const ActionEdge& edge : av.edges) {
    if (edge.action_class >= static_cast<int>(out.size())) {
      throw StructuralError("action class out of range for action dimension");
    }
    const double value = execute_program(edge.program, observation);
    out[edge.action_class] = value != value ? default_action : value;
  }
}

std::vector<double> emit_actions(const ActionVertex& av,
                                 std::span<const double> observation,
                                 int action_dim, double default_action) {
  std::vector<double> out(static_cast<std::size_t>(action_dim));
  emit_actions_into(av, observation, out, default_action);
  return out;
}

void run_agent_into(const Root& root, std::span<const double> observation,
                    const VertexStore& store, std::span<double> out,
                    double default_action) {
  if (root.kind == AgentKind::Maple) {
    emit_actions_into(store.action_vertex(root.vertex), observation, out, default_action);
    return;
  }
  std::vector<VertexId> visited;
  VertexId current = root.vertex;
  while (store.is_team(current)) {
    visited.push_back(current);
    current = route_team(store.team(current), observation, visited);
  }
  emit_actions_into(store.action_vertex(current), observation, out, default_action);
}

std::vector<double> run_agent(const Root& root, std::span<const double> observation,
                              const VertexStore& store, int action_dim,
                              double default_action) {
  std::vector<double> out(static_cast<std::size_t>(action_dim));
  run_agent_into(root, observation, store, out, default_action);
  return out;
}

std::vector<VertexId> reachable_set(VertexId start, const VertexStore& store) {
  std::set<VertexId> seen;
  std::vector<VertexId> stack{start};
  while (!stack.empty()) {
    const VertexId id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) {
      continue;
    }
    const Vertex& v = store.vertex(id);
    if (const Team* t = std::get_if<Team>(&v)) {
      for (const TeamEdge& edge : t->edges) {
        if (seen.count(edge.destination) == 0) {
          stack.push_back(edge.destination);
        }
      }
    }
  }
  return std::vector<VertexId>(seen.begin(), seen.end());
}

std::vector<VertexId> reachable_set(const Root& root, const VertexStore& store) {
  return reachable_set(root.vertex, store);
}

}  // namespace matpg
