#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "matpg/rng.hpp"

namespace matpg {

using AgentId = std::uint64_t;

/// Per-agent, per-task mean episode returns. Rows are agents (with attached
/// ids), columns are tasks; rectangular and fully filled before selection.
class ScoreMatrix {
 public:
  ScoreMatrix(std::vector<AgentId> agent_ids, std::size_t task_count);

  std::size_t agent_count() const { return agent_ids_.size(); }
  std::size_t task_count() const { return task_count_; }
  AgentId agent_id(std::size_t row) const { return agent_ids_[row]; }
  const std::vector<AgentId>& agent_ids() const { return agent_ids_; }

  double at(std::size_t row, std::size_t task) const {
    return values_[row * task_count_ + task];
  }
  double& at(std::size_t row, std::size_t task) {
    return values_[row * task_count_ + task];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * task_count_, task_count_};
  }
  std::vector<double> column(std::size_t task) const;

 private:
  std::vector<AgentId> agent_ids_;
  std::size_t task_count_;
  std::vector<double> values_;
};

struct SelectionConfig {
  enum class Method { Tournament, Lexicase };
  Method method = Method::Tournament;
  double elite_proportion = 0.05;
  int tournament_size = 3;
  double survivor_proportion = 0.05;
  double epsilon_coefficient = 0.1;

  void validate() const;
};

/// Weighted mean of per-task scores; the scalar fitness used by tournament
/// selection and champion tie-breaks.
double aggregate_fitness(std::span<const double> row, std::span<const double> weights);
double aggregate_fitness(std::span<const double> row);

double median(std::vector<double> values);

/// Median absolute deviation, with the even-length median taken as the mean
/// of the two central order statistics.
double mad(std::span<const double> values);

struct TournamentResult {
  std::vector<AgentId> elites;   // pass unchanged to the next generation
  std::vector<AgentId> winners;  // the reproduction pool
};

/// Elites are the top ceil(elite_proportion * N) by aggregate fitness (ties
/// to the lower id); the rest are shuffled into subsets of tournament_size
/// (the last may be smaller) and each subset contributes its best.
TournamentResult tournament_select(const ScoreMatrix& scores,
                                   const SelectionConfig& cfg, RngStream& rng);

/// Per-task epsilons: epsilon_coefficient * MAD of each task column over the
/// full population.
std::vector<double> lexicase_epsilons(const ScoreMatrix& scores, double coefficient);

/// One pass of the lexicase filter: for each task in order, keep agents with
/// score >= (pool max) - epsilon. Mutates `pool_rows` in place.
void lexicase_filter(const ScoreMatrix& scores, std::vector<std::size_t>& pool_rows,
                     std::span<const std::size_t> task_order,
                     std::span<const double> epsilons);

/// Full lexicase selection of a single agent: filter, then a uniform random
/// pick if several remain.
AgentId lexicase_select_one(const ScoreMatrix& scores,
                            std::span<const std::size_t> pool_rows,
                            std::span<const std::size_t> task_order,
                            std::span<const double> epsilons, RngStream& rng);

/// Repeats lexicase_select_one with fresh random task orders until
/// ceil(survivor_proportion * N) distinct survivors are collected. When the
/// selectable set saturates early, the remainder is padded with the best
/// non-selected agents by aggregate fitness.
std::vector<AgentId> epsilon_lexicase_select(const ScoreMatrix& scores,
                                             const SelectionConfig& cfg,
                                             RngStream& rng);

}  // namespace matpg
