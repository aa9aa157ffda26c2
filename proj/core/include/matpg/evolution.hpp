#pragma once

#include <cstdint>
#include <vector>

#include "matpg/environment.hpp"
#include "matpg/graph.hpp"
#include "matpg/rng.hpp"
#include "matpg/selection.hpp"
#include "matpg/variation.hpp"

namespace matpg {

struct EvolutionConfig {
  int n_agents = 120;
  double maple_proportion = 2.0 / 3.0;
  int n_generations = 100;
  int train_episodes_per_task = 3;
  int valid_episodes_per_task = 5;
  int valid_combined_episodes = 5;
  int validation_frequency = 50;
  SelectionConfig selection;
  MutationConfig mutation;
  std::uint64_t seed = 1;
  int workers = 1;

  int maple_count() const;
  int matpg_count() const { return n_agents - maple_count(); }
  void validate() const;
};

/// Per-generation population summary. `seconds` is wall clock and is never
/// written into deterministic outputs.
struct GenerationStats {
  int generation = 0;
  std::vector<double> task_best;
  std::vector<double> task_mean;
  std::vector<double> task_std;  // population (n denominator) standard deviation
  AgentId champion_id = 0;
  double seconds = 0.0;
  int faults = 0;
};

struct ValidationResult {
  int generation = 0;
  AgentId champion_id = 0;
  double champion_combined = 0.0;
  std::vector<double> champion_task_scores;
  std::vector<double> population_best_task;
  int faults = 0;
};

/// Runs one full episode and returns the accumulated return. Environment
/// faults abort the episode with the return collected so far and set
/// `fault`.
double run_episode(const Root& root, const VertexStore& store, Environment& env,
                   std::uint64_t seed, double default_action, bool* fault = nullptr);

/// Evaluates one agent on every suite task: episodes_per_task episodes per
/// task with per-episode seeds derived from `rng`; per-task score is the
/// mean episode return.
std::vector<double> evaluate_agent(const Root& root, const VertexStore& store,
                                   const EnvironmentSuite& suite,
                                   int episodes_per_task, const RngStream& rng,
                                   int* faults = nullptr);

/// Serializable engine state; what checkpoints carry.
struct EngineState {
  EvolutionConfig config;
  int generation = 0;
  VertexStore store;
  std::vector<Root> maple_roots;
  std::vector<Root> matpg_roots;
};

/// The generation loop: evaluation, per-sub-population selection,
/// reproduction by mutated cloning, and garbage collection. All randomness
/// is derived from (seed, generation, phase, slot, ...) keys, so results are
/// bit-identical for any worker count and across resumes.
class Engine {
 public:
  Engine(EvolutionConfig cfg, const EnvironmentSuite& suite);
  Engine(EngineState state, const EnvironmentSuite& suite);

  /// Builds the initial population: MAPLE roots own a full action vertex
  /// (one fresh program per class); MATPG roots are two-edge teams pointing
  /// at random MAPLE vertices.
  void init_population();

  GenerationStats step_generation();
  ValidationResult run_validation() const;

  int generation() const { return generation_; }
  const EvolutionConfig& config() const { return cfg_; }
  const VertexStore& store() const { return store_; }
  const std::vector<Root>& maple_roots() const { return maple_roots_; }
  const std::vector<Root>& matpg_roots() const { return matpg_roots_; }

  /// All roots in slot order: the MAPLE pool then the MATPG pool.
  std::vector<Root> all_roots() const;
  Root find_root(AgentId id) const;

  EngineState snapshot() const;

 private:
  ScoreMatrix evaluate_pool(const std::vector<Root>& pool, std::uint64_t pool_tag,
                            int episodes_per_task, std::uint64_t phase_tag,
                            std::vector<int>& fault_counts) const;
  std::vector<Root> refill_pool(const std::vector<Root>& retained,
                                const std::vector<Root>& parents,
                                std::size_t pool_size, std::uint64_t pool_tag);

  EvolutionConfig cfg_;
  const EnvironmentSuite* suite_;
  VertexStore store_;
  std::vector<Root> maple_roots_;
  std::vector<Root> matpg_roots_;
  int generation_ = 0;
};

}  // namespace matpg
