#include "matpg/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace matpg {

namespace {

// Deterministic parallel map: each index writes only its own slot, so the
// result is independent of scheduling.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> threads;
  const int count = std::min<int>(workers, static_cast<int>(n));
  threads.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) {
    threads.emplace_back(worker);
  }
  for (std::thread& t : threads) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

constexpr std::uint64_t kMaplePoolTag = 0x0a;
constexpr std::uint64_t kMatpgPoolTag = 0x0b;

}  // namespace

int EvolutionConfig::maple_count() const {
  return static_cast<int>(std::llround(maple_proportion * n_agents));
}

void EvolutionConfig::validate() const {
  if (n_agents < 1 || n_generations < 0) {
    throw std::invalid_argument("n_agents must be >= 1");
  }
  if (!(maple_proportion >= 0.0 && maple_proportion <= 1.0)) {
    throw std::invalid_argument("maple_proportion must be in [0, 1]");
  }
  if (train_episodes_per_task < 1 || valid_episodes_per_task < 1 ||
      valid_combined_episodes < 1) {
    throw std::invalid_argument("episode counts must be >= 1");
  }
  if (validation_frequency < 1) {
    throw std::invalid_argument("validation_frequency must be >= 1");
  }
  if (workers < 1) {
    throw std::invalid_argument("workers must be >= 1");
  }
  selection.validate();
  mutation.validate();
}

double run_episode(const Root& root, const VertexStore& store, Environment& env,
                   std::uint64_t seed, double default_action, bool* fault) {
  if (fault) {
    *fault = false;
  }
  double total = 0.0;
  try {
    std::vector<double> observation = env.reset(seed);
    const EnvironmentSpec spec = env.spec();
    std::vector<double> actions(static_cast<std::size_t>(spec.action_dim));
    // Guard against plug-in environments that never report done.
    const long limit = spec.max_steps > 0 ? spec.max_steps + 1 : 1 << 20;
    for (long step = 0; step < limit; ++step) {
      run_agent_into(root, observation, store, actions, default_action);
      StepResult result = env.step(actions);
      total += result.reward;
      if (result.done) {
        break;
      }
      observation = std::move(result.observation);
    }
  } catch (const std::exception&) {
    if (fault) {
      *fault = true;
    }
  }
  return total;
}

std::vector<double> evaluate_agent(const Root& root, const VertexStore& store,
                                   const EnvironmentSuite& suite,
                                   int episodes_per_task, const RngStream& rng,
                                   int* faults) {
  std::vector<double> scores(suite.task_count(), 0.0);
  for (std::size_t t = 0; t < suite.task_count(); ++t) {
    auto env = suite.make_env(t);
    double sum = 0.0;
    for (int ep = 0; ep < episodes_per_task; ++ep) {
      bool fault = false;
      sum += run_episode(root, store, *env,
                         rng.derive_key({t, static_cast<std::uint64_t>(ep)}),
                         suite.default_action(), &fault);
      if (fault && faults) {
        ++*faults;
      }
    }
    scores[t] = sum / episodes_per_task;
  }
  return scores;
}

Engine::Engine(EvolutionConfig cfg, const EnvironmentSuite& suite)
    : cfg_(std::move(cfg)), suite_(&suite) {
  cfg_.mutation.observation_dim = suite.observation_dim();
  cfg_.validate();
}

Engine::Engine(EngineState state, const EnvironmentSuite& suite)
    : cfg_(std::move(state.config)),
      suite_(&suite),
      store_(std::move(state.store)),
      maple_roots_(std::move(state.maple_roots)),
      matpg_roots_(std::move(state.matpg_roots)),
      generation_(state.generation) {
  cfg_.mutation.observation_dim = suite.observation_dim();
  cfg_.validate();
  if (static_cast<int>(maple_roots_.size()) != cfg_.maple_count() ||
      static_cast<int>(matpg_roots_.size()) != cfg_.matpg_count()) {
    throw std::invalid_argument("restored population sizes do not match config");
  }
}

void Engine::init_population() {
  store_ = VertexStore();
  maple_roots_.clear();
  matpg_roots_.clear();
  generation_ = 0;

  const int action_dim = suite_->action_dim();
  for (int slot = 0; slot < cfg_.maple_count(); ++slot) {
    RngStream rng(derive_seed(cfg_.seed, {stream_tag::kInit, kMaplePoolTag,
                                          static_cast<std::uint64_t>(slot)}));
    const VertexId id =
        store_.add_action_vertex(random_full_action_vertex(rng, cfg_.mutation, action_dim));
    maple_roots_.push_back(Root{AgentKind::Maple, id});
  }
  for (int slot = 0; slot < cfg_.matpg_count(); ++slot) {
    RngStream rng(derive_seed(cfg_.seed, {stream_tag::kInit, kMatpgPoolTag,
                                          static_cast<std::uint64_t>(slot)}));
    Team team;
    for (int e = 0; e < 2; ++e) {
      VertexId dest;
      if (!maple_roots_.empty()) {
        dest = maple_roots_[rng.index(maple_roots_.size())].vertex;
      } else {
        dest = store_.add_action_vertex(
            random_full_action_vertex(rng, cfg_.mutation, action_dim));
      }
      team.edges.push_back(TeamEdge{random_program(rng, cfg_.mutation), dest});
    }
    const VertexId id = store_.add_team(std::move(team));
    matpg_roots_.push_back(Root{AgentKind::Matpg, id});
  }

  std::vector<Root> roots = maple_roots_;
  roots.insert(roots.end(), matpg_roots_.begin(), matpg_roots_.end());
  store_.set_roots(std::move(roots));
}

std::vector<Root> Engine::all_roots() const {
  std::vector<Root> roots = maple_roots_;
  roots.insert(roots.end(), matpg_roots_.begin(), matpg_roots_.end());
  return roots;
}

Root Engine::find_root(AgentId id) const {
  for (const Root& root : all_roots()) {
    if (root.vertex == id) {
      return root;
    }
  }
  throw std::invalid_argument("no root with agent id " + std::to_string(id));
}

ScoreMatrix Engine::evaluate_pool(const std::vector<Root>& pool, std::uint64_t pool_tag,
                                  int episodes_per_task, std::uint64_t phase_tag,
                                  std::vector<int>& fault_counts) const {
  std::vector<AgentId> ids;
  ids.reserve(pool.size());
  for (const Root& root : pool) {
    ids.push_back(root.vertex);
  }
  ScoreMatrix scores(std::move(ids), suite_->task_count());
  fault_counts.assign(pool.size(), 0);
  parallel_for(pool.size(), cfg_.workers, [&](std::size_t slot) {
    const RngStream rng(derive_seed(
        cfg_.seed, {phase_tag, static_cast<std::uint64_t>(generation_), pool_tag, slot}));
    const std::vector<double> row = evaluate_agent(
        pool[slot], store_, *suite_, episodes_per_task, rng, &fault_counts[slot]);
    for (std::size_t t = 0; t < row.size(); ++t) {
      scores.at(slot, t) = row[t];
    }
  });
  return scores;
}

std::vector<Root> Engine::refill_pool(const std::vector<Root>& retained,
                                      const std::vector<Root>& parents,
                                      std::size_t pool_size, std::uint64_t pool_tag) {
  std::vector<Root> pool = retained;
  const int action_dim = suite_->action_dim();
  for (std::uint64_t k = 0; pool.size() < pool_size; ++k) {
    RngStream rng(derive_seed(
        cfg_.seed, {stream_tag::kVary, static_cast<std::uint64_t>(generation_), pool_tag, k}));
    const Root& parent = parents[rng.index(parents.size())];
    pool.push_back(spawn_offspring(parent, store_, rng, cfg_.mutation, action_dim));
  }
  return pool;
}

GenerationStats Engine::step_generation() {
  const auto start = std::chrono::steady_clock::now();
  GenerationStats stats;
  stats.generation = generation_;

  // 1. Evaluate both sub-populations against the frozen store.
  std::vector<int> maple_faults;
  std::vector<int> matpg_faults;
  const ScoreMatrix maple_scores =
      evaluate_pool(maple_roots_, kMaplePoolTag, cfg_.train_episodes_per_task,
                    stream_tag::kEval, maple_faults);
  const ScoreMatrix matpg_scores =
      evaluate_pool(matpg_roots_, kMatpgPoolTag, cfg_.train_episodes_per_task,
                    stream_tag::kEval, matpg_faults);
  for (int f : maple_faults) {
    stats.faults += f;
  }
  for (int f : matpg_faults) {
    stats.faults += f;
  }

  // 2. Population summary over both pools.
  const std::size_t tasks = suite_->task_count();
  stats.task_best.assign(tasks, -std::numeric_limits<double>::infinity());
  stats.task_mean.assign(tasks, 0.0);
  stats.task_std.assign(tasks, 0.0);
  double best_fitness = -std::numeric_limits<double>::infinity();
  stats.champion_id = 0;
  const std::size_t population = maple_roots_.size() + matpg_roots_.size();
  auto absorb = [&](const ScoreMatrix& scores) {
    for (std::size_t r = 0; r < scores.agent_count(); ++r) {
      for (std::size_t t = 0; t < tasks; ++t) {
        const double v = scores.at(r, t);
        stats.task_best[t] = std::max(stats.task_best[t], v);
        stats.task_mean[t] += v;
      }
      const double fitness = aggregate_fitness(scores.row(r));
      if (fitness > best_fitness ||
          (fitness == best_fitness && scores.agent_id(r) < stats.champion_id)) {
        best_fitness = fitness;
        stats.champion_id = scores.agent_id(r);
      }
    }
  };
  absorb(maple_scores);
  absorb(matpg_scores);
  for (std::size_t t = 0; t < tasks; ++t) {
    stats.task_mean[t] /= static_cast<double>(population);
  }
  for (std::size_t t = 0; t < tasks; ++t) {
    double ss = 0.0;
    for (const ScoreMatrix* scores : {&maple_scores, &matpg_scores}) {
      for (std::size_t r = 0; r < scores->agent_count(); ++r) {
        const double d = scores->at(r, t) - stats.task_mean[t];
        ss += d * d;
      }
    }
    stats.task_std[t] = std::sqrt(ss / static_cast<double>(population));
  }

  // 3. Survivor selection per sub-population. Retained agents pass
  //    unchanged into the next generation; parents feed reproduction.
  auto select = [&](const ScoreMatrix& scores, std::uint64_t pool_tag)
      -> std::pair<std::set<AgentId>, std::set<AgentId>> {
    if (scores.agent_count() == 0) {
      return {};
    }
    RngStream rng(derive_seed(cfg_.seed, {stream_tag::kSelect,
                                          static_cast<std::uint64_t>(generation_),
                                          pool_tag}));
    if (cfg_.selection.method == SelectionConfig::Method::Tournament) {
      TournamentResult result = tournament_select(scores, cfg_.selection, rng);
      std::set<AgentId> retained(result.elites.begin(), result.elites.end());
      std::set<AgentId> parents(result.winners.begin(), result.winners.end());
      if (parents.empty()) {
        parents = retained;
      }
      return {retained, parents};
    }
    const std::vector<AgentId> survivors =
        epsilon_lexicase_select(scores, cfg_.selection, rng);
    std::set<AgentId> retained(survivors.begin(), survivors.end());
    return {retained, retained};
  };
  const auto [maple_retained, maple_parents] = select(maple_scores, kMaplePoolTag);
  const auto [matpg_retained, matpg_parents] = select(matpg_scores, kMatpgPoolTag);

  auto filter = [](const std::vector<Root>& pool, const std::set<AgentId>& keep) {
    std::vector<Root> out;
    for (const Root& root : pool) {
      if (keep.count(root.vertex) != 0) {
        out.push_back(root);
      }
    }
    return out;
  };
  auto merge = [](std::set<AgentId> a, const std::set<AgentId>& b) {
    a.insert(b.begin(), b.end());
    return a;
  };

  // 4. Refill the MAPLE pool first so MATPG mutation sees the new MAPLE
  //    sub-population, then drop dead material before MATPG offspring draw
  //    destinations from the store.
  const std::vector<Root> maple_live =
      filter(maple_roots_, merge(maple_retained, maple_parents));
  const std::vector<Root> matpg_live =
      filter(matpg_roots_, merge(matpg_retained, matpg_parents));
  {
    std::vector<Root> roots = maple_live;
    roots.insert(roots.end(), matpg_live.begin(), matpg_live.end());
    store_.set_roots(std::move(roots));
    store_.gc();
  }

  std::vector<Root> new_maple;
  if (!maple_roots_.empty()) {
    new_maple = refill_pool(filter(maple_roots_, maple_retained),
                            filter(maple_roots_, maple_parents),
                            maple_roots_.size(), kMaplePoolTag);
  }
  {
    std::vector<Root> roots = new_maple;
    roots.insert(roots.end(), matpg_live.begin(), matpg_live.end());
    store_.set_roots(std::move(roots));
    store_.gc();
  }

  std::vector<Root> new_matpg;
  if (!matpg_roots_.empty()) {
    new_matpg = refill_pool(filter(matpg_roots_, matpg_retained),
                            filter(matpg_roots_, matpg_parents),
                            matpg_roots_.size(), kMatpgPoolTag);
  }

  maple_roots_ = std::move(new_maple);
  matpg_roots_ = std::move(new_matpg);
  {
    std::vector<Root> roots = maple_roots_;
    roots.insert(roots.end(), matpg_roots_.begin(), matpg_roots_.end());
    store_.set_roots(std::move(roots));
    store_.gc();
  }

  ++generation_;
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

ValidationResult Engine::run_validation() const {
  ValidationResult result;
  result.generation = generation_;
  const std::size_t tasks = suite_->task_count();
  const std::vector<Root> roots = all_roots();
  const std::size_t n = roots.size();
  if (n == 0) {
    throw std::logic_error("validation on an empty population");
  }

  std::vector<std::vector<double>> task_scores(n);
  std::vector<double> combined(n, 0.0);
  std::vector<int> fault_counts(n, 0);
  parallel_for(n, cfg_.workers, [&](std::size_t slot) {
    const std::uint64_t pool_tag =
        roots[slot].kind == AgentKind::Maple ? kMaplePoolTag : kMatpgPoolTag;
    const RngStream rng(derive_seed(
        cfg_.seed, {stream_tag::kValidate, static_cast<std::uint64_t>(generation_),
                    pool_tag, roots[slot].vertex}));
    task_scores[slot] = evaluate_agent(roots[slot], store_, *suite_,
                                       cfg_.valid_episodes_per_task, rng,
                                       &fault_counts[slot]);
    if (suite_->supports_combined() && tasks > 1) {
      double sum = 0.0;
      for (int ep = 0; ep < cfg_.valid_combined_episodes; ++ep) {
        auto env = suite_->make_combined_env();
        bool fault = false;
        sum += run_episode(
            roots[slot], store_, *env,
            derive_seed(cfg_.seed,
                        {stream_tag::kValidateCombined,
                         static_cast<std::uint64_t>(generation_), pool_tag,
                         roots[slot].vertex, static_cast<std::uint64_t>(ep)}),
            suite_->default_action(), &fault);
        if (fault) {
          ++fault_counts[slot];
        }
      }
      combined[slot] = sum / cfg_.valid_combined_episodes;
    } else {
      combined[slot] = aggregate_fitness(task_scores[slot]);
    }
  });

  result.population_best_task.assign(tasks, -std::numeric_limits<double>::infinity());
  for (std::size_t slot = 0; slot < n; ++slot) {
    result.faults += fault_counts[slot];
    for (std::size_t t = 0; t < tasks; ++t) {
      result.population_best_task[t] =
          std::max(result.population_best_task[t], task_scores[slot][t]);
    }
  }

  // Champion: best combined score, ties by per-task mean then lower id.
  std::size_t champion = 0;
  for (std::size_t slot = 1; slot < n; ++slot) {
    const double a = combined[slot];
    const double b = combined[champion];
    if (a > b) {
      champion = slot;
    } else if (a == b) {
      const double ma = aggregate_fitness(task_scores[slot]);
      const double mb = aggregate_fitness(task_scores[champion]);
      if (ma > mb || (ma == mb && roots[slot].vertex < roots[champion].vertex)) {
        champion = slot;
      }
    }
  }
  result.champion_id = roots[champion].vertex;
  result.champion_combined = combined[champion];
  result.champion_task_scores = task_scores[champion];
  return result;
}

EngineState Engine::snapshot() const {
  EngineState state;
  state.config = cfg_;
  state.generation = generation_;
  state.store = store_;
  state.maple_roots = maple_roots_;
  state.matpg_roots = matpg_roots_;
  return state;
}

}  // namespace matpg
