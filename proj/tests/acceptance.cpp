// Acceptance suite: runs every release criterion and prints one pass/fail
// line each. Exit code is the number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "expression_eval.hpp"
#include "matpg/checkpoint.hpp"
#include "matpg/commands.hpp"
#include "matpg/interpret.hpp"
#include "matpg/metrics.hpp"
#include "matpg/point_mass.hpp"
#include "matpg/selection.hpp"
#include "matpg/text.hpp"
#include "matpg/variation.hpp"

using namespace matpg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "matpg_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

// Shared desk-scale experiment configuration.
const char* kExperimentConfig = R"({
  "train_episodes_per_task": 3,
  "valid_episodes_per_task": 5,
  "valid_combined_episodes": 5,
  "validation_frequency": 20,
  "workers": 8,
  "mutation": {"init_program_size": 16, "max_program_size": 64}
})";

fs::path experiment_config() {
  const fs::path path = work_dir() / "experiment.json";
  if (!fs::exists(path)) {
    std::ofstream out(path);
    out << kExperimentConfig;
  }
  return path;
}

// --- criterion 1: AUC normalization reproduces the reference coefficients

Outcome c1_difficulty_normalization() {
  const std::vector<double> aucs = {29.7, 26.0, 20.6, 16.3, 10.4};
  const std::vector<double> expected = {1.00, 0.88, 0.69, 0.55, 0.35};
  const std::vector<double> got = normalize_difficulty(aucs);
  Outcome out;
  std::ostringstream detail;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    detail << format_double(got[i]) << (i + 1 < expected.size() ? " " : "");
    if (std::abs(got[i] - expected[i]) > 0.01) {
      out.pass = false;
    }
  }
  out.detail = "coefficients: " + detail.str();
  return out;
}

// --- criterion 2: Bonferroni correction

Outcome c2_bonferroni() {
  Outcome out;
  const double corrected = bonferroni(0.05, 10);
  out.pass = corrected == 0.005;
  out.detail = "bonferroni(0.05, 10) = " + format_double(corrected);
  return out;
}

// --- criterion 3: exhaustive zero-epsilon lexicase oracle equivalence

Outcome c3_lexicase_exhaustive() {
  Outcome out;
  // all 5-agent x 3-task matrices over {0,1,2}: 3^15 matrices, 6 orders
  constexpr int kAgents = 5;
  constexpr int kTasks = 3;
  const std::array<std::array<std::size_t, 3>, 6> orders = {{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
  }};
  std::vector<AgentId> ids(kAgents);
  std::iota(ids.begin(), ids.end(), 1);
  ScoreMatrix m(ids, kTasks);
  const std::vector<double> eps(kTasks, 0.0);
  std::vector<std::size_t> pool;
  pool.reserve(kAgents);

  long long checked = 0;
  const long long total = 14348907;  // 3^15
  std::array<int, kAgents * kTasks> digits{};
  for (long long code = 0; code < total; ++code) {
    for (int r = 0; r < kAgents; ++r) {
      for (int t = 0; t < kTasks; ++t) {
        m.at(r, t) = static_cast<double>(digits[r * kTasks + t]);
      }
    }
    for (const auto& order : orders) {
      pool.assign({0, 1, 2, 3, 4});
      lexicase_filter(m, pool, order, eps);

      // independent bitmask oracle
      unsigned mask = 0x1f;
      for (const std::size_t task : order) {
        if (__builtin_popcount(mask) <= 1) {
          break;
        }
        int best = -1;
        for (int r = 0; r < kAgents; ++r) {
          if ((mask >> r) & 1u) {
            best = std::max(best, digits[r * kTasks + static_cast<int>(task)]);
          }
        }
        unsigned next = 0;
        for (int r = 0; r < kAgents; ++r) {
          if (((mask >> r) & 1u) &&
              digits[r * kTasks + static_cast<int>(task)] == best) {
            next |= 1u << r;
          }
        }
        mask = next;
      }
      unsigned got = 0;
      for (const std::size_t row : pool) {
        got |= 1u << row;
      }
      if (got != mask) {
        out.pass = false;
        out.detail = "mismatch at matrix code " + std::to_string(code);
        return out;
      }
      ++checked;
    }
    // increment base-3 counter
    for (int d = 0; d < kAgents * kTasks; ++d) {
      if (++digits[d] < 3) {
        break;
      }
      digits[d] = 0;
    }
  }
  out.detail = std::to_string(checked) + " filter runs matched the oracle";
  return out;
}

// --- criterion 4: epsilon thresholds against a brute-force MAD oracle

Outcome c4_epsilon_thresholds() {
  Outcome out;
  RngStream rng(20250811);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 5 + rng.index(60);
    std::vector<double> column(n);
    for (double& v : column) {
      v = rng.uniform(-100.0, 100.0);
    }

    // brute-force median/MAD oracle via full sorts
    auto oracle_median = [](std::vector<double> xs) {
      std::sort(xs.begin(), xs.end());
      const std::size_t k = xs.size();
      return k % 2 == 1 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
    };
    const double med = oracle_median(column);
    std::vector<double> deviations;
    deviations.reserve(n);
    for (double v : column) {
      deviations.push_back(std::abs(v - med));
    }
    const double oracle_mad = oracle_median(deviations);
    const double oracle_eps = 0.1 * oracle_mad;

    const double eps = 0.1 * mad(column);
    if (std::abs(eps - oracle_eps) > 1e-12) {
      out.pass = false;
      out.detail = "epsilon mismatch at trial " + std::to_string(trial);
      return out;
    }

    const double best = *std::max_element(column.begin(), column.end());
    std::set<std::size_t> expected;
    for (std::size_t i = 0; i < n; ++i) {
      if (column[i] >= best - oracle_eps) {
        expected.insert(i);
      }
    }
    std::vector<AgentId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    ScoreMatrix m(ids, 1);
    for (std::size_t i = 0; i < n; ++i) {
      m.at(i, 0) = column[i];
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    const std::array<std::size_t, 1> order = {0};
    const std::array<double, 1> eps_arr = {eps};
    lexicase_filter(m, pool, order, eps_arr);
    const std::set<std::size_t> got(pool.begin(), pool.end());
    if (got != expected) {
      out.pass = false;
      out.detail = "surviving set mismatch at trial " + std::to_string(trial);
      return out;
    }
  }
  out.detail = "1000 columns matched the median/MAD oracle";
  return out;
}

// --- criterion 5: graph termination and determinism

Outcome c5_graph_termination() {
  Outcome out;
  RngStream rng(555);
  MutationConfig cfg;
  cfg.init_program_size = 3;
  cfg.observation_dim = 4;
  for (int trial = 0; trial < 1000; ++trial) {
    VertexStore store;
    std::vector<VertexId> avs;
    const int n_avs = 1 + static_cast<int>(rng.index(4));
    for (int i = 0; i < n_avs; ++i) {
      ActionVertex av;
      av.edges.push_back(ActionEdge{random_program(rng, cfg), 0});
      avs.push_back(store.add_action_vertex(std::move(av)));
    }
    std::vector<VertexId> teams;
    const int n_teams = 2 + static_cast<int>(rng.index(6));
    for (int i = 0; i < n_teams; ++i) {
      Team team;
      team.edges.push_back(
          TeamEdge{random_program(rng, cfg), avs[rng.index(avs.size())]});
      const int extra = 1 + static_cast<int>(rng.index(3));
      for (int e = 0; e < extra; ++e) {
        VertexId dest;
        if (!teams.empty() && rng.chance(0.6)) {
          dest = teams[rng.index(teams.size())];
        } else {
          dest = avs[rng.index(avs.size())];
        }
        team.edges.push_back(TeamEdge{random_program(rng, cfg), dest});
      }
      teams.push_back(store.add_team(std::move(team)));
    }
    // force a cycle back to an earlier team (and often to itself)
    {
      Team team = store.team(teams.back());
      team.edges.push_back(
          TeamEdge{random_program(rng, cfg), teams[rng.index(teams.size())]});
      store.replace_team(teams.back(), std::move(team));
    }
    const VertexId start = teams[rng.index(teams.size())];
    store.set_roots({Root{AgentKind::Matpg, start}});

    std::vector<double> observation(4);
    for (double& x : observation) {
      x = rng.uniform(-5.0, 5.0);
    }

    // traced traversal: hop bound and no revisits
    std::vector<VertexId> visited;
    VertexId current = start;
    std::size_t hops = 0;
    while (store.is_team(current)) {
      if (std::find(visited.begin(), visited.end(), current) != visited.end()) {
        out.pass = false;
        out.detail = "team revisited at trial " + std::to_string(trial);
        return out;
      }
      visited.push_back(current);
      current = route_team(store.team(current), observation, visited);
      if (++hops > teams.size()) {
        out.pass = false;
        out.detail = "hop bound exceeded at trial " + std::to_string(trial);
        return out;
      }
    }

    const Root root{AgentKind::Matpg, start};
    const std::vector<double> a = run_agent(root, observation, store, 1, 0.0);
    const std::vector<double> b = run_agent(root, observation, store, 1, 0.0);
    if (std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) != 0) {
      out.pass = false;
      out.detail = "non-deterministic inference at trial " + std::to_string(trial);
      return out;
    }
  }
  out.detail = "1000 stores with forced cycles terminated within the hop bound";
  return out;
}

// --- criterion 6: mutation invariant sweep

Outcome c6_mutation_invariants() {
  Outcome out;
  RngStream rng(666);
  MutationConfig cfg;
  cfg.init_program_size = 8;
  cfg.observation_dim = 5;
  const int action_dim = 4;

  // shared store with a live MAPLE sub-population
  VertexStore store;
  std::vector<VertexId> maples;
  for (int i = 0; i < 6; ++i) {
    const VertexId id =
        store.add_action_vertex(random_full_action_vertex(rng, cfg, action_dim));
    store.add_root(Root{AgentKind::Maple, id});
    maples.push_back(id);
  }
  Team seed_team;
  seed_team.edges.push_back(TeamEdge{random_program(rng, cfg), maples[0]});
  seed_team.edges.push_back(TeamEdge{random_program(rng, cfg), maples[1]});
  const VertexId team_id = store.add_team(std::move(seed_team));
  store.add_root(Root{AgentKind::Matpg, team_id});

  Program program = random_program(rng, cfg);
  for (int i = 0; i < 10000; ++i) {
    program = mutate_program(program, rng, cfg);
    if (program.size() < 1 ||
        (cfg.max_program_size > 0 &&
         program.size() > static_cast<std::size_t>(cfg.max_program_size)) ||
        !program.valid_for(5)) {
      out.pass = false;
      out.detail = "program invariant violated at step " + std::to_string(i);
      return out;
    }
  }

  ActionVertex av = random_full_action_vertex(rng, cfg, action_dim);
  for (int i = 0; i < 10000; ++i) {
    av = mutate_action_vertex(av, rng, cfg, action_dim);
    std::set<int> classes;
    bool ok = !av.edges.empty() &&
              av.edges.size() <= static_cast<std::size_t>(action_dim);
    for (const ActionEdge& e : av.edges) {
      ok = ok && e.action_class >= 0 && e.action_class < action_dim &&
           classes.insert(e.action_class).second && e.program.valid_for(5);
    }
    if (!ok) {
      out.pass = false;
      out.detail = "action-vertex invariant violated at step " + std::to_string(i);
      return out;
    }
  }

  Team team = store.team(team_id);
  for (int i = 0; i < 10000; ++i) {
    team = mutate_team(team, rng, cfg, store, action_dim);
    std::size_t action_edges = 0;
    bool ok = team.edges.size() >= 2;
    for (const TeamEdge& e : team.edges) {
      ok = ok && store.contains(e.destination) && e.program.valid_for(5);
      if (ok && !store.is_team(e.destination)) {
        ++action_edges;
      }
    }
    if (!ok || action_edges < 1) {
      out.pass = false;
      out.detail = "team invariant violated at step " + std::to_string(i);
      return out;
    }
  }
  out.detail = "30000 operator applications, zero violations";
  return out;
}

// --- criterion 7: gc soundness against the brute-force oracle

Outcome c7_gc_soundness() {
  Outcome out;
  RngStream rng(77);
  MutationConfig cfg;
  cfg.init_program_size = 2;
  cfg.observation_dim = 3;
  for (int trial = 0; trial < 500; ++trial) {
    VertexStore store;
    std::vector<VertexId> avs;
    std::vector<VertexId> teams;
    const int n_avs = 2 + static_cast<int>(rng.index(5));
    for (int i = 0; i < n_avs; ++i) {
      ActionVertex av;
      av.edges.push_back(ActionEdge{random_program(rng, cfg), 0});
      avs.push_back(store.add_action_vertex(std::move(av)));
    }
    const int n_teams = 1 + static_cast<int>(rng.index(6));
    for (int i = 0; i < n_teams; ++i) {
      Team team;
      team.edges.push_back(
          TeamEdge{random_program(rng, cfg), avs[rng.index(avs.size())]});
      for (int e = 0; e < 1 + static_cast<int>(rng.index(3)); ++e) {
        VertexId dest;
        if (!teams.empty() && rng.chance(0.5)) {
          dest = teams[rng.index(teams.size())];
        } else {
          dest = avs[rng.index(avs.size())];
        }
        team.edges.push_back(TeamEdge{random_program(rng, cfg), dest});
      }
      teams.push_back(store.add_team(std::move(team)));
    }
    // random root subset (some trials end up rootless)
    std::vector<Root> roots;
    for (const VertexId id : teams) {
      if (rng.chance(0.5)) {
        roots.push_back(Root{AgentKind::Matpg, id});
      }
    }
    for (const VertexId id : avs) {
      if (rng.chance(0.3)) {
        roots.push_back(Root{AgentKind::Maple, id});
      }
    }
    store.set_roots(roots);

    std::set<VertexId> live;
    for (const Root& r : roots) {
      for (const VertexId id : reachable_set(r.vertex, store)) {
        live.insert(id);
      }
    }
    const std::size_t before = store.size();
    const std::size_t removed = store.gc();
    if (removed != before - live.size() || store.size() != live.size() ||
        !store.consistent()) {
      out.pass = false;
      out.detail = "gc mismatch at trial " + std::to_string(trial);
      return out;
    }
    for (const VertexId id : live) {
      if (!store.contains(id)) {
        out.pass = false;
        out.detail = "gc removed a live vertex at trial " + std::to_string(trial);
        return out;
      }
    }
  }
  out.detail = "500 random stores matched the reachability oracle";
  return out;
}

// --- criterion 8: pretty-printer round trip

Outcome c8_render_round_trip() {
  Outcome out;
  RngStream rng(88);
  MutationConfig cfg;
  cfg.init_program_size = 10;
  cfg.observation_dim = 6;
  for (int p = 0; p < 100; ++p) {
    const Program program = random_program(rng, cfg);
    const std::string text = render_expression(program);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> observation(6);
      for (double& x : observation) {
        x = rng.uniform(-5.0, 5.0);
      }
      const double expected = execute_program(program, observation);
      double parsed;
      try {
        parsed = expr_eval::evaluate(text, observation);
      } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("parse failure: ") + e.what();
        return out;
      }
      bool ok;
      if (std::isnan(expected)) {
        ok = std::isnan(parsed);
      } else if (std::isinf(expected)) {
        ok = parsed == expected;
      } else {
        ok = std::abs(parsed - expected) <=
             1e-9 * std::max(1.0, std::abs(expected));
      }
      if (!ok) {
        out.pass = false;
        out.detail = "value mismatch on program " + std::to_string(p);
        return out;
      }
    }
  }
  out.detail = "100 programs x 100 observations within 1e-9 relative";
  return out;
}

// --- criterion 9: statistics sanity

Outcome c9_statistics() {
  Outcome out;
  const std::vector<double> same = {3.0, 1.0, 4.0, 1.5};
  const WelchResult identical = welch_t(same, same);
  if (identical.t != 0.0 || identical.p != 1.0) {
    out.pass = false;
    out.detail = "identical samples did not give (t=0, p=1)";
    return out;
  }
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {2, 3, 4, 5, 6};
  const WelchResult fixed = welch_t(a, b);
  if (std::abs(fixed.p - 0.34659350708733416) > 1e-3) {
    out.pass = false;
    out.detail = "fixed example p = " + format_double(fixed.p);
    return out;
  }
  RngStream rng(909);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> xs(3 + rng.index(9));
    std::vector<double> ys(3 + rng.index(9));
    for (double& v : xs) {
      v = rng.uniform(-10.0, 10.0);
    }
    for (double& v : ys) {
      v = rng.uniform(-10.0, 10.0);
    }
    const double d = cohens_d(xs, ys);
    if (cohens_d(ys, xs) != -d) {
      out.pass = false;
      out.detail = "cohens_d antisymmetry failed at trial " + std::to_string(i);
      return out;
    }
    std::vector<double> kxs = xs;
    std::vector<double> kys = ys;
    for (double& v : kxs) {
      v *= 8.0;
    }
    for (double& v : kys) {
      v *= 8.0;
    }
    if (cohens_d(kxs, kys) != d) {
      out.pass = false;
      out.detail = "cohens_d scale invariance failed at trial " + std::to_string(i);
      return out;
    }
  }
  out.detail = "t-test fixtures and 1000 effect-size property trials held";
  return out;
}

// --- criterion 10: end-to-end determinism across worker counts

Outcome c10_worker_determinism() {
  Outcome out;
  const fs::path base = work_dir() / "determinism";
  auto train = [&](const char* label, int workers) {
    RunOptions options;
    options.config_path = experiment_config().string();
    options.out_dir = (base / label).string();
    options.algo = "matpg";
    options.algo_explicit = true;
    options.selection = "lexicase";
    options.selection_explicit = true;
    options.tasks = {0, 1, 2};
    options.seeds = {42};
    options.agents = 120;
    options.generations = 30;
    options.workers = workers;
    options.quiet = true;
    return cmd_train(options);
  };
  if (train("w1", 1) != 0 || train("w4", 4) != 0) {
    out.pass = false;
    out.detail = "training run failed";
    return out;
  }
  const fs::path rel = fs::path("matpg_lexicase") / "tasks_0-1-2" / "seed_42";
  const std::string stats1 = read_file(base / "w1" / rel / "stats.csv");
  const std::string stats4 = read_file(base / "w4" / rel / "stats.csv");
  const std::string valid1 = read_file(base / "w1" / rel / "validation.csv");
  const std::string valid4 = read_file(base / "w4" / rel / "validation.csv");
  if (stats1.empty() || stats1 != stats4) {
    out.pass = false;
    out.detail = "stats CSVs differ between 1 and 4 workers";
    return out;
  }
  if (valid1 != valid4) {
    out.pass = false;
    out.detail = "validation CSVs differ between 1 and 4 workers";
    return out;
  }
  out.detail = "stats and validation CSVs byte-identical for 1 vs 4 workers";
  return out;
}

// --- criterion 11: desk-scale directional claim

struct TrendData {
  // final combined validation score per seed, and final population-best per
  // task per seed
  std::vector<double> combined;
  std::map<int, std::vector<double>> population_best;
};

TrendData read_trend(const fs::path& run_dir, const std::vector<std::uint64_t>& seeds) {
  TrendData data;
  for (const std::uint64_t seed : seeds) {
    const fs::path file = run_dir / ("seed_" + std::to_string(seed)) / "validation.csv";
    std::ifstream in(file);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool first = true;
    while (std::getline(in, line)) {
      if (first || line.empty()) {
        first = false;
        continue;
      }
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
      }
      rows.push_back(std::move(cells));
    }
    if (rows.empty()) {
      continue;
    }
    const std::string final_gen = rows.back()[0];
    bool combined_recorded = false;
    for (const auto& row : rows) {
      if (row[0] != final_gen) {
        continue;
      }
      if (!combined_recorded) {
        data.combined.push_back(parse_double(row[3]));
        combined_recorded = true;
      }
      data.population_best[std::stoi(row[1])].push_back(parse_double(row[5]));
    }
  }
  return data;
}

Outcome c11_directional_claim() {
  Outcome out;
  const fs::path base = work_dir() / "trend";
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  for (const char* algo : {"maple", "matpg"}) {
    for (const char* selection : {"tournament", "lexicase"}) {
      RunOptions options;
      options.config_path = experiment_config().string();
      options.out_dir = base.string();
      options.algo = algo;
      options.algo_explicit = true;
      options.selection = selection;
      options.selection_explicit = true;
      options.tasks = {0, 1, 2};
      options.seeds = seeds;
      options.agents = 120;
      options.generations = 60;
      options.quiet = true;
      if (cmd_train(options) != 0) {
        out.pass = false;
        out.detail = std::string("training failed for ") + algo + "+" + selection;
        return out;
      }
    }
  }
  const fs::path tasks_rel = "tasks_0-1-2";
  const TrendData matpg_lexi = read_trend(base / "matpg_lexicase" / tasks_rel, seeds);
  const TrendData maple_tourn =
      read_trend(base / "maple_tournament" / tasks_rel, seeds);
  const TrendData maple_lexi = read_trend(base / "maple_lexicase" / tasks_rel, seeds);
  const TrendData matpg_tourn =
      read_trend(base / "matpg_tournament" / tasks_rel, seeds);

  if (matpg_lexi.combined.size() != seeds.size() ||
      maple_tourn.combined.size() != seeds.size()) {
    out.pass = false;
    out.detail = "missing validation data";
    return out;
  }

  int paired_wins = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (matpg_lexi.combined[i] >= maple_tourn.combined[i]) {
      ++paired_wins;
    }
  }

  // population-best per task: lexicase runs (both algorithms pooled) vs
  // tournament runs, compared by median over seeds
  int dominated_tasks = 0;
  std::ostringstream task_detail;
  for (const int task : {0, 1, 2}) {
    std::vector<double> lexi = maple_lexi.population_best.at(task);
    const auto& extra = matpg_lexi.population_best.at(task);
    lexi.insert(lexi.end(), extra.begin(), extra.end());
    std::vector<double> tourn = maple_tourn.population_best.at(task);
    const auto& extra2 = matpg_tourn.population_best.at(task);
    tourn.insert(tourn.end(), extra2.begin(), extra2.end());
    const double ml = median(lexi);
    const double mt = median(tourn);
    if (ml > mt) {
      ++dominated_tasks;
    }
    task_detail << " task" << task << " " << format_double(ml)
                << (ml > mt ? " > " : " <= ") << format_double(mt);
  }

  out.pass = paired_wins >= 4 && dominated_tasks >= 2;
  out.detail = "paired wins " + std::to_string(paired_wins) + "/5, dominated tasks " +
               std::to_string(dominated_tasks) + "/3;" + task_detail.str();
  return out;
}

// --- criterion 12: task independence via env-check

Outcome c12_env_check() {
  Outcome out;
  EnvCheckOptions options;
  options.config_path = experiment_config().string();
  options.out_dir = (work_dir() / "env_check").string();
  options.agents = 600;
  options.generations = 80;
  options.seeds = {1};
  options.episodes = 10;
  options.threshold = 0.30;
  options.workers = 8;
  options.quiet = true;
  const int rc = cmd_env_check(options);
  out.pass = rc == 0;
  const std::string report = read_file(fs::path(options.out_dir) / "report.txt");
  const auto last_line = report.find_last_of('\n', report.size() - 2);
  out.detail = rc == 0 ? "all off-diagonal transfer below 30%"
                       : report.substr(last_line == std::string::npos ? 0
                                                                      : last_line + 1);
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* label;
    Criterion run;
  };
  const std::vector<Entry> criteria = {
      {1, "difficulty normalization reproduces reference coefficients",
       c1_difficulty_normalization},
      {2, "Bonferroni correction", c2_bonferroni},
      {3, "exhaustive zero-epsilon lexicase oracle equivalence",
       c3_lexicase_exhaustive},
      {4, "epsilon thresholds match the MAD oracle", c4_epsilon_thresholds},
      {5, "graph termination and determinism", c5_graph_termination},
      {6, "mutation invariant sweep", c6_mutation_invariants},
      {7, "gc soundness", c7_gc_soundness},
      {8, "pretty-printer round trip", c8_render_round_trip},
      {9, "statistics sanity", c9_statistics},
      {10, "end-to-end determinism across worker counts", c10_worker_determinism},
      {11, "desk-scale directional claim", c11_directional_claim},
      {12, "toy-suite task independence (env-check)", c12_env_check},
  };

  int failures = 0;
  for (const Entry& entry : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] C%-2d %s (%.1fs) %s\n", outcome.pass ? "PASS" : "FAIL",
                entry.id, entry.label, seconds, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) {
      ++failures;
    }
  }
  return failures;
}
