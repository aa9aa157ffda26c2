#pragma once

#include "matpg/graph.hpp"
#include "matpg/rng.hpp"

namespace matpg {

/// Probabilities and sizes for all stochastic variation operators. Defaults
/// follow the reference hyperparameter table; observation_dim must be set
/// from the target environment before programs are created or mutated.
struct MutationConfig {
  double p_team_add_edge = 0.7;
  double p_team_del_edge = 0.7;
  double p_team_mut_edge = 0.5;
  double p_team_mut_action = 0.5;
  double p_team_dest_change = 0.5;
  double p_team_dest_change_action = 0.99;
  double p_action_add_edge = 0.2;
  double p_action_del_edge = 0.1;
  double p_action_mut_edge = 0.5;
  double p_action_mut_act_edge = 0.2;
  double p_action_swap_edges = 0.1;
  double p_program_add_line = 0.9;
  double p_program_del_line = 0.5;
  double p_program_swap_lines = 1.0;
  double p_program_mutate_constant = 0.5;
  int init_program_size = 100;
  int max_program_size = 0;  // 0 = unbounded
  int observation_dim = 1;

  void validate() const;
};

/// AutoML-Zero style constant mutation: with equal probability scale by
/// Uniform[0.5, 2.0], flip the sign, or redraw from Uniform[-1, 1].
double mutate_constant(double c, RngStream& rng);

Instruction random_instruction(RngStream& rng, const MutationConfig& cfg);
Program random_program(RngStream& rng, const MutationConfig& cfg);

/// Builds an action vertex owning every class in [0, action_dim) with fresh
/// random programs; the initial form of a MAPLE agent.
ActionVertex random_full_action_vertex(RngStream& rng, const MutationConfig& cfg,
                                       int action_dim);

Program mutate_program(const Program& program, RngStream& rng,
                       const MutationConfig& cfg);

ActionVertex mutate_action_vertex(const ActionVertex& av, RngStream& rng,
                                  const MutationConfig& cfg, int action_dim);

/// Mutates a team. New edges and destination changes draw an action vertex
/// from the MAPLE sub-population with probability p_team_dest_change_action,
/// otherwise a random team from the store. Deep-copied action vertices are
/// registered in the store. All structural invariants are preserved;
/// operations that would violate them are refused.
Team mutate_team(const Team& team, RngStream& rng, const MutationConfig& cfg,
                 VertexStore& store, int action_dim);

/// Duplicates a root: the root vertex is copied (programs deep-copied) while
/// team edge destinations keep referencing the shared store vertices. The
/// new root is registered in the store.
Root clone_root(const Root& root, VertexStore& store);

/// clone_root followed by mutation repeated until at least one structural
/// change occurred, so offspring never equal their parents exactly.
Root spawn_offspring(const Root& parent, VertexStore& store, RngStream& rng,
                     const MutationConfig& cfg, int action_dim);

namespace detail {
// Change-counting variants used by spawn_offspring and tests.
Program mutate_program_counted(const Program& program, RngStream& rng,
                               const MutationConfig& cfg, int& changes);
ActionVertex mutate_action_vertex_counted(const ActionVertex& av, RngStream& rng,
                                          const MutationConfig& cfg, int action_dim,
                                          int& changes);
Team mutate_team_counted(const Team& team, RngStream& rng, const MutationConfig& cfg,
                         VertexStore& store, int action_dim, int& changes);
}  // namespace detail

}  // namespace matpg
