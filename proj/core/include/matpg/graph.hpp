#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "matpg/lgp.hpp"

namespace matpg {

/// Opaque stable identifier into a VertexStore. Ids are never reused within
/// a run, so they double as agent identities and tie-break keys.
using VertexId = std::uint64_t;

struct TeamEdge {
  Program program;
  VertexId destination = 0;
};

/// A routing vertex. Invariants: at least two edges, and at least one edge
/// whose destination is an action vertex (the termination guarantee).
struct Team {
  std::vector<TeamEdge> edges;
};

struct ActionEdge {
  Program program;
  int action_class = 0;
};

/// A leaf vertex emitting a continuous action vector: one program per owned
/// action class, each class at most once, 1..action_dim edges.
struct ActionVertex {
  std::vector<ActionEdge> edges;
};

using Vertex = std::variant<Team, ActionVertex>;

enum class AgentKind : std::uint8_t {
  Matpg,  // root is a Team
  Maple,  // root is an ActionVertex
};

struct Root {
  AgentKind kind = AgentKind::Maple;
  VertexId vertex = 0;

  bool operator==(const Root&) const = default;
};

/// Shared arena of vertices referenced by all roots. Iteration is in id
/// order (std::map) so every store-wide draw is deterministic.
class VertexStore {
 public:
  VertexId add_team(Team team);
  VertexId add_action_vertex(ActionVertex av);

  void replace_team(VertexId id, Team team);
  void replace_action_vertex(VertexId id, ActionVertex av);

  bool contains(VertexId id) const { return vertices_.count(id) != 0; }
  bool is_team(VertexId id) const;
  const Vertex& vertex(VertexId id) const;
  const Team& team(VertexId id) const;
  const ActionVertex& action_vertex(VertexId id) const;

  const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  /// All team ids in ascending id order.
  std::vector<VertexId> team_ids() const;

  const std::vector<Root>& roots() const { return roots_; }
  void add_root(Root root);
  void set_roots(std::vector<Root> roots);

  /// Removes every vertex unreachable from all roots; returns the count.
  std::size_t gc();

  /// Checks that every edge destination resolves. Cheap enough to run after
  /// each generation.
  bool consistent() const;

  std::uint64_t next_id() const { return next_id_; }
  /// Checkpoint restore only: ids must stay unique within a run.
  void restore(std::map<VertexId, Vertex> vertices, std::vector<Root> roots,
               std::uint64_t next_id);

 private:
  std::map<VertexId, Vertex> vertices_;
  std::vector<Root> roots_;
  std::uint64_t next_id_ = 1;
};

/// Executes every edge program and returns the destination with the highest
/// sanitized bid among edges whose destination is not a visited team. Ties
/// break toward the lowest edge index.
VertexId route_team(const Team& team, std::span<const double> observation,
                    std::span<const VertexId> visited);

/// Fills `out` (length action_dim) with each owned class's program output;
/// classes with no edge get `default_action`, and NaN outputs are replaced
/// by it as well. Infinite values pass through for the caller to clamp.
void emit_actions_into(const ActionVertex& av, std::span<const double> observation,
                       std::span<double> out, double default_action);

std::vector<double> emit_actions(const ActionVertex& av,
                                 std::span<const double> observation,
                                 int action_dim, double default_action);

/// Runs one inference pass: MAPLE roots emit directly; MATPG roots traverse
/// teams via route_team with a visited set until an action vertex is
/// reached. Terminates in at most (number of teams) hops.
void run_agent_into(const Root& root, std::span<const double> observation,
                    const VertexStore& store, std::span<double> out,
                    double default_action);

std::vector<double> run_agent(const Root& root, std::span<const double> observation,
                              const VertexStore& store, int action_dim,
                              double default_action);

/// All vertices reachable from `start` (inclusive), ascending id order.
std::vector<VertexId> reachable_set(VertexId start, const VertexStore& store);
std::vector<VertexId> reachable_set(const Root& root, const VertexStore& store);

}  // namespace matpg
