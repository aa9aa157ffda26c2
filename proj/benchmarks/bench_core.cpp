#include <benchmark/benchmark.h>

#include "matpg/evolution.hpp"
#include "matpg/point_mass.hpp"
#include "matpg/selection.hpp"
#include "matpg/variation.hpp"

namespace {

using namespace matpg;

MutationConfig bench_mutation() {
  MutationConfig cfg;
  cfg.init_program_size = 32;
  cfg.observation_dim = 5;
  return cfg;
}

void BM_ExecuteProgram(benchmark::State& state) {
  RngStream rng(7);
  MutationConfig cfg = bench_mutation();
  cfg.init_program_size = static_cast<int>(state.range(0));
  const Program program = random_program(rng, cfg);
  const std::vector<double> obs = {0.1, -0.2, 0.3, 2.0, 0.35};
  for (auto _ : state) {
    benchmark::DoNotOptimize(execute_program(program, obs));
  }
}
BENCHMARK(BM_ExecuteProgram)->Arg(16)->Arg(64)->Arg(256);

void BM_RunAgentMatpg(benchmark::State& state) {
  PointMassSuite suite = make_suite({0, 1, 2});
  EvolutionConfig cfg;
  cfg.n_agents = 30;
  cfg.mutation = bench_mutation();
  cfg.seed = 11;
  Engine engine(cfg, suite);
  engine.init_population();
  const Root root = engine.matpg_roots().front();
  const std::vector<double> obs = {0.1, -0.2, 0.3, 2.0, 0.35};
  std::vector<double> actions(2);
  for (auto _ : state) {
    run_agent_into(root, obs, engine.store(), actions, 0.0);
    benchmark::DoNotOptimize(actions.data());
  }
}
BENCHMARK(BM_RunAgentMatpg);

void BM_MutateTeam(benchmark::State& state) {
  PointMassSuite suite = make_suite({0, 1, 2});
  EvolutionConfig cfg;
  cfg.n_agents = 30;
  cfg.mutation = bench_mutation();
  cfg.seed = 13;
  Engine engine(cfg, suite);
  engine.init_population();
  VertexStore store = engine.store();
  const Team team = store.team(engine.matpg_roots().front().vertex);
  RngStream rng(17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mutate_team(team, rng, cfg.mutation, store, 2));
  }
}
BENCHMARK(BM_MutateTeam);

void BM_LexicaseSelect(benchmark::State& state) {
  const std::size_t agents = static_cast<std::size_t>(state.range(0));
  std::vector<AgentId> ids(agents);
  for (std::size_t i = 0; i < agents; ++i) {
    ids[i] = i + 1;
  }
  ScoreMatrix scores(ids, 5);
  RngStream rng(23);
  for (std::size_t r = 0; r < agents; ++r) {
    for (std::size_t t = 0; t < 5; ++t) {
      scores.at(r, t) = rng.uniform(-5.0, 20.0);
    }
  }
  SelectionConfig cfg;
  cfg.method = SelectionConfig::Method::Lexicase;
  for (auto _ : state) {
    RngStream draw(31);
    benchmark::DoNotOptimize(epsilon_lexicase_select(scores, cfg, draw));
  }
}
BENCHMARK(BM_LexicaseSelect)->Arg(100)->Arg(1000);

void BM_Generation(benchmark::State& state) {
  PointMassSuite suite = make_suite({0, 1, 2});
  EvolutionConfig cfg;
  cfg.n_agents = static_cast<int>(state.range(0));
  cfg.mutation = bench_mutation();
  cfg.train_episodes_per_task = 1;
  cfg.seed = 37;
  for (auto _ : state) {
    state.PauseTiming();
    Engine engine(cfg, suite);
    engine.init_population();
    state.ResumeTiming();
    benchmark::DoNotOptimize(engine.step_generation());
  }
}
BENCHMARK(BM_Generation)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
