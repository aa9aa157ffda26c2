#pragma once

#include <string>
#include <vector>

#include "matpg/graph.hpp"

namespace matpg {

/// One agent reduced to its reachable subgraph, with stable labels: teams
/// T_k in BFS order from the root, action vertices A_k in first-encounter
/// order, programs p_k in (vertex order, edge order) — team programs first.
struct PrunedAgent {
  AgentKind kind = AgentKind::Maple;
  std::vector<VertexId> teams;
  std::vector<VertexId> action_vertices;
  std::vector<Program> programs;

  struct TeamEdgeInfo {
    std::size_t team;           // index into `teams`
    std::size_t program;        // index into `programs`
    bool destination_is_team;
    std::size_t destination;    // index into `teams` or `action_vertices`
  };
  struct ActionEdgeInfo {
    std::size_t action_vertex;  // index into `action_vertices`
    std::size_t program;
    int action_class;
  };
  std::vector<TeamEdgeInfo> team_edges;
  std::vector<ActionEdgeInfo> action_edges;
};

PrunedAgent prune(const Root& root, const VertexStore& store);

/// Rebuilds a store holding exactly the pruned subgraph; the returned root
/// behaves identically to the original agent.
Root materialize(const PrunedAgent& agent, VertexStore& store);

/// Closed-form expression for register 0's final value: instructions are
/// substituted in execution order, dead assignments drop out, observation
/// inputs render as s_k, and subexpressions built purely from initial
/// registers and constants fold to numbers. Unit constants are elided.
std::string render_expression(const Program& program);

/// Plain-text listing, one `p_k <- expression` line per program.
std::string expression_listing(const PrunedAgent& agent);

/// Deterministic DOT text: teams as boxes, action vertices as ellipses,
/// action classes as small terminal nodes; edges carry program labels.
std::string to_dot(const PrunedAgent& agent);

}  // namespace matpg
