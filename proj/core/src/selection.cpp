#include "matpg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "matpg/lgp.hpp"

namespace matpg {

ScoreMatrix::ScoreMatrix(std::vector<AgentId> agent_ids, std::size_t task_count)
    : agent_ids_(std::move(agent_ids)),
      task_count_(task_count),
      values_(agent_ids_.size() * task_count, 0.0) {
  if (task_count_ == 0) {
    throw std::invalid_argument("score matrix needs at least one task");
  }
}

std::vector<double> ScoreMatrix::column(std::size_t task) const {
  std::vector<double> col(agent_count());
  for (std::size_t r = 0; r < agent_count(); ++r) {
    col[r] = at(r, task);
  }
  return col;
}

void SelectionConfig::validate() const {
  if (!(elite_proportion > 0.0 && elite_proportion <= 1.0)) {
    throw std::invalid_argument("elite_proportion must be in (0, 1]");
  }
  if (!(survivor_proportion > 0.0 && survivor_proportion <= 1.0)) {
    throw std::invalid_argument("survivor_proportion must be in (0, 1]");
  }
  if (tournament_size < 2) {
    throw std::invalid_argument("tournament_size must be >= 2");
  }
  if (!(epsilon_coefficient >= 0.0)) {
    throw std::invalid_argument("epsilon_coefficient must be >= 0");
  }
}

double aggregate_fitness(std::span<const double> row, std::span<const double> weights) {
  if (row.size() != weights.size()) {
    throw StructuralError("fitness weights length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    num += row[i] * weights[i];
    den += weights[i];
  }
  if (den == 0.0) {
    throw StructuralError("fitness weights sum to zero");
  }
  return num / den;
}

double aggregate_fitness(std::span<const double> row) {
  const std::vector<double> ones(row.size(), 1.0);
  return aggregate_fitness(row, ones);
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw StructuralError("median of empty sample");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) {
    return values[n / 2];
  }
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mad(std::span<const double> values) {
  if (values.empty()) {
    throw StructuralError("mad of empty sample");
  }
  const double med = median(std::vector<double>(values.begin(), values.end()));
  std::vector<double> deviations(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    deviations[i] = std::abs(values[i] - med);
  }
  return median(std::move(deviations));
}

namespace {

// Sort rows by descending fitness, ties toward the lower agent id.
std::vector<std::size_t> fitness_ranking(const ScoreMatrix& scores) {
  std::vector<std::size_t> order(scores.agent_count());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> fitness(scores.agent_count());
  for (std::size_t r = 0; r < scores.agent_count(); ++r) {
    fitness[r] = aggregate_fitness(scores.row(r));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (fitness[a] != fitness[b]) {
      return fitness[a] > fitness[b];
    }
    return scores.agent_id(a) < scores.agent_id(b);
  });
  return order;
}

}  // namespace

TournamentResult tournament_select(const ScoreMatrix& scores,
                                   const SelectionConfig& cfg, RngStream& rng) {
  const std::size_t n = scores.agent_count();
  if (n == 0) {
    return {};
  }
  const auto elite_count = static_cast<std::size_t>(
      std::ceil(cfg.elite_proportion * static_cast<double>(n)));
  const std::vector<std::size_t> ranking = fitness_ranking(scores);

  TournamentResult result;
  std::set<std::size_t> elite_rows;
  for (std::size_t i = 0; i < std::min(elite_count, n); ++i) {
    result.elites.push_back(scores.agent_id(ranking[i]));
    elite_rows.insert(ranking[i]);
  }

  std::vector<std::size_t> remaining;
  for (std::size_t r = 0; r < n; ++r) {
    if (elite_rows.count(r) == 0) {
      remaining.push_back(r);
    }
  }
  rng.shuffle(remaining);

  const auto subset = static_cast<std::size_t>(cfg.tournament_size);
  for (std::size_t start = 0; start < remaining.size(); start += subset) {
    const std::size_t end = std::min(start + subset, remaining.size());
    std::size_t best = remaining[start];
    double best_fitness = aggregate_fitness(scores.row(best));
    for (std::size_t i = start + 1; i < end; ++i) {
      const std::size_t row = remaining[i];
      const double fitness = aggregate_fitness(scores.row(row));
      if (fitness > best_fitness ||
          (fitness == best_fitness && scores.agent_id(row) < scores.agent_id(best))) {
        best = row;
        best_fitness = fitness;
      }
    }
    result.winners.push_back(scores.agent_id(best));
  }
  return result;
}

std::vector<double> lexicase_epsilons(const ScoreMatrix& scores, double coefficient) {
  std::vector<double> epsilons(scores.task_count());
  for (std::size_t t = 0; t < scores.task_count(); ++t) {
    epsilons[t] = coefficient * mad(scores.column(t));
  }
  return epsilons;
}

void lexicase_filter(const ScoreMatrix& scores, std::vector<std::size_t>& pool_rows,
                     std::span<const std::size_t> task_order,
                     std::span<const double> epsilons) {
  for (const std::size_t task : task_order) {
    if (pool_rows.size() <= 1) {
      break;
    }
    double best = scores.at(pool_rows[0], task);
    for (std::size_t i = 1; i < pool_rows.size(); ++i) {
      best = std::max(best, scores.at(pool_rows[i], task));
    }
    const double threshold = best - epsilons[task];
    std::erase_if(pool_rows,
                  [&](std::size_t row) { return scores.at(row, task) < threshold; });
  }
}

AgentId lexicase_select_one(const ScoreMatrix& scores,
                            std::span<const std::size_t> pool_rows,
                            std::span<const std::size_t> task_order,
                            std::span<const double> epsilons, RngStream& rng) {
  if (pool_rows.empty()) {
    throw StructuralError("lexicase selection over an empty pool");
  }
  std::vector<std::size_t> pool(pool_rows.begin(), pool_rows.end());
  lexicase_filter(scores, pool, task_order, epsilons);
  const std::size_t pick = pool.size() == 1 ? 0 : rng.index(pool.size());
  return scores.agent_id(pool[pick]);
}

std::vector<AgentId> epsilon_lexicase_select(const ScoreMatrix& scores,
                                             const SelectionConfig& cfg,
                                             RngStream& rng) {
  const std::size_t n = scores.agent_count();
  if (n == 0) {
    return {};
  }
  const auto target = static_cast<std::size_t>(
      std::ceil(cfg.survivor_proportion * static_cast<double>(n)));
  if (n <= target) {
    return scores.agent_ids();
  }

  const std::vector<double> epsilons =
      lexicase_epsilons(scores, cfg.epsilon_coefficient);
  std::vector<std::size_t> full_pool(n);
  std::iota(full_pool.begin(), full_pool.end(), 0);
  std::vector<std::size_t> task_order(scores.task_count());
  std::iota(task_order.begin(), task_order.end(), 0);

  std::vector<AgentId> survivors;
  std::set<AgentId> seen;
  // Repetition cap: with few selectable agents (e.g. one generalist strictly
  // best everywhere) the distinct-survivor target may be unreachable by
  // repetition alone; remaining slots are then padded by fitness rank.
  const std::size_t max_attempts = 100 + 20 * target;
  for (std::size_t attempt = 0; attempt < max_attempts && survivors.size() < target;
       ++attempt) {
    rng.shuffle(task_order);
    const AgentId pick =
        lexicase_select_one(scores, full_pool, task_order, epsilons, rng);
    if (seen.insert(pick).second) {
      survivors.push_back(pick);
    }
  }
  if (survivors.size() < target) {
    for (const std::size_t row : fitness_ranking(scores)) {
      if (survivors.size() >= target) {
        break;
      }
      const AgentId id = scores.agent_id(row);
      if (seen.insert(id).second) {
        survivors.push_back(id);
      }
    }
  }
  return survivors;
}

}  // namespace matpg
