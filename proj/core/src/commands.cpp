#include "matpg/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "config_json.hpp"
#include "matpg/checkpoint.hpp"
#include "matpg/interpret.hpp"
#include "matpg/metrics.hpp"
#include "matpg/text.hpp"

namespace matpg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunConfig {
  EvolutionConfig evolution;
  PointMassConfig environment;
};

RunConfig load_run_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) {
    return cfg;
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse failure in " + path + ": " + e.what());
  }
  cfg.evolution = evolution_from_json(j);
  if (j.contains("environment")) {
    cfg.environment = point_mass_from_json(j.at("environment"));
  }
  return cfg;
}

std::string tasks_label(const std::vector<int>& tasks) {
  std::string label = "tasks_";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (i > 0) {
      label += '-';
    }
    label += std::to_string(tasks[i]);
  }
  return label;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path.string());
  }
  out << content;
}

void write_manifest(const fs::path& dir, const EvolutionConfig& evolution,
                    const PointMassConfig& environment, const std::vector<int>& tasks,
                    std::uint64_t seed, const std::string& selection_label,
                    const std::string& algo_label) {
  json manifest;
  manifest["engine"] = json{{"name", "matpg"}, {"version", kEngineVersion}};
  manifest["algo"] = algo_label;
  manifest["selection"] = selection_label;
  manifest["tasks"] = tasks;
  manifest["seed"] = seed;
  manifest["config"] = evolution_to_json(evolution);
  manifest["environment"] = point_mass_to_json(environment);
  manifest["outputs"] = json{{"stats", "stats.csv"},
                             {"validation", "validation.csv"},
                             {"checkpoints", "checkpoints"},
                             {"champion", "champion"}};
  manifest["config_hash"] =
      format_double_hex(static_cast<double>(fnv1a(manifest["config"].dump())));
  write_text_file(dir / "manifest.json", manifest.dump(1) + "\n");
}

constexpr const char* kStatsHeader = "gen,task,best,mean,std,champion_id\n";
constexpr const char* kValidationHeader =
    "gen,task,champion_id,combined,champion_task,population_best\n";

std::string stats_rows(const GenerationStats& stats, const PointMassSuite& suite) {
  std::string rows;
  for (std::size_t t = 0; t < suite.task_count(); ++t) {
    rows += std::to_string(stats.generation) + "," +
            std::to_string(suite.task_id(t)) + "," + format_double(stats.task_best[t]) +
            "," + format_double(stats.task_mean[t]) + "," +
            format_double(stats.task_std[t]) + "," + std::to_string(stats.champion_id) +
            "\n";
  }
  return rows;
}

std::string validation_rows(const ValidationResult& result,
                            const PointMassSuite& suite) {
  std::string rows;
  for (std::size_t t = 0; t < suite.task_count(); ++t) {
    rows += std::to_string(result.generation) + "," +
            std::to_string(suite.task_id(t)) + "," + std::to_string(result.champion_id) +
            "," + format_double(result.champion_combined) + "," +
            format_double(result.champion_task_scores[t]) + "," +
            format_double(result.population_best_task[t]) + "\n";
  }
  return rows;
}

// Rewrites a CSV keeping only rows with generation < cutoff; used on resume
// so re-run generations produce identical files.
void truncate_csv_to_generation(const fs::path& path, const std::string& header,
                                int cutoff) {
  if (!fs::exists(path)) {
    write_text_file(path, header);
    return;
  }
  std::ifstream in(path);
  std::string line;
  std::string kept;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) {
      continue;
    }
    const int gen = std::stoi(line.substr(0, line.find(',')));
    if (gen < cutoff) {
      kept += line + "\n";
    }
  }
  in.close();
  write_text_file(path, header + kept);
}

void append_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) {
    throw std::runtime_error("cannot append to file: " + path.string());
  }
  out << content;
}

void export_champion(const Engine& engine, AgentId champion, const fs::path& dir) {
  fs::create_directories(dir);
  const Root root = engine.find_root(champion);
  const PrunedAgent agent = prune(root, engine.store());
  write_text_file(dir / "champion.dot", to_dot(agent));
  write_text_file(dir / "champion.txt", expression_listing(agent));
  json summary;
  summary["agent_id"] = champion;
  summary["kind"] = root.kind == AgentKind::Matpg ? "matpg" : "maple";
  summary["teams"] = agent.teams.size();
  summary["action_vertices"] = agent.action_vertices.size();
  summary["programs"] = agent.programs.size();
  write_text_file(dir / "summary.json", summary.dump(1) + "\n");
}

struct SingleRunResult {
  ValidationResult final_validation;
  fs::path run_dir;
};

SingleRunResult run_single_training(EvolutionConfig cfg, const PointMassSuite& suite,
                                    const fs::path& run_dir,
                                    const std::string& algo_label,
                                    const std::string& selection_label,
                                    const std::vector<int>& tasks,
                                    int checkpoint_every, bool resume, bool quiet) {
  fs::create_directories(run_dir / "checkpoints");
  write_manifest(run_dir, cfg, suite.config(), tasks, cfg.seed, selection_label,
                 algo_label);

  std::optional<Engine> engine;
  const fs::path last_checkpoint = run_dir / "checkpoints" / "last.json";
  if (resume && fs::exists(last_checkpoint)) {
    EngineState state = load_checkpoint(last_checkpoint.string());
    if (state.config.seed != cfg.seed) {
      throw std::runtime_error("resume seed mismatch: checkpoint has seed " +
                               std::to_string(state.config.seed));
    }
    state.config = cfg;  // flags may change workers or the generation budget
    engine.emplace(std::move(state), suite);
    if (!quiet) {
      std::cout << "resumed at generation " << engine->generation() << "\n";
    }
  } else {
    engine.emplace(cfg, suite);
    engine->init_population();
  }

  const fs::path stats_path = run_dir / "stats.csv";
  const fs::path validation_path = run_dir / "validation.csv";
  truncate_csv_to_generation(stats_path, kStatsHeader, engine->generation());
  truncate_csv_to_generation(validation_path, kValidationHeader, engine->generation());

  ValidationResult last_validation;
  for (int g = engine->generation(); g < cfg.n_generations; ++g) {
    if (g % cfg.validation_frequency == 0) {
      last_validation = engine->run_validation();
      append_file(validation_path, validation_rows(last_validation, suite));
    }
    const GenerationStats stats = engine->step_generation();
    append_file(stats_path, stats_rows(stats, suite));
    if (!quiet) {
      std::cout << "gen " << stats.generation << " champion " << stats.champion_id;
      for (std::size_t t = 0; t < suite.task_count(); ++t) {
        std::cout << " task" << suite.task_id(t) << " best "
                  << format_double(stats.task_best[t]);
      }
      std::cout << " (" << format_double(stats.seconds) << "s)\n";
    }
    if (checkpoint_every > 0 && (g + 1) % checkpoint_every == 0) {
      const EngineState state = engine->snapshot();
      save_checkpoint(state,
                      (run_dir / "checkpoints" /
                       ("gen_" + std::to_string(engine->generation()) + ".json"))
                          .string());
      save_checkpoint(state, last_checkpoint.string());
    }
  }

  // Final validation, checkpoint and champion export.
  last_validation = engine->run_validation();
  append_file(validation_path, validation_rows(last_validation, suite));
  const EngineState state = engine->snapshot();
  save_checkpoint(state, (run_dir / "checkpoints" / "final.json").string());
  save_checkpoint(state, last_checkpoint.string());
  export_champion(*engine, last_validation.champion_id, run_dir / "champion");

  return SingleRunResult{last_validation, run_dir};
}

EvolutionConfig effective_config(const RunOptions& options, const RunConfig& file_cfg,
                                 std::uint64_t seed) {
  EvolutionConfig cfg = file_cfg.evolution;
  if (options.algo_explicit || options.config_path.empty()) {
    cfg.maple_proportion = options.algo == "maple" ? 1.0 : 2.0 / 3.0;
  }
  if (options.selection_explicit || options.config_path.empty()) {
    cfg.selection.method = options.selection == "lexicase"
                               ? SelectionConfig::Method::Lexicase
                               : SelectionConfig::Method::Tournament;
  }
  if (options.generations >= 0) {
    cfg.n_generations = options.generations;
  }
  if (options.agents > 0) {
    cfg.n_agents = options.agents;
  }
  if (options.workers > 0) {
    cfg.workers = options.workers;
  }
  cfg.seed = seed;
  return cfg;
}

std::string selection_label_of(const EvolutionConfig& cfg) {
  return cfg.selection.method == SelectionConfig::Method::Lexicase ? "lexicase"
                                                                   : "tournament";
}

std::string algo_label_of(const EvolutionConfig& cfg) {
  return cfg.maple_proportion >= 1.0 ? "maple" : "matpg";
}

}  // namespace

int cmd_train(const RunOptions& options) {
  try {
    const RunConfig file_cfg = load_run_config(options.config_path);
    for (const std::uint64_t seed : options.seeds) {
      const EvolutionConfig cfg = effective_config(options, file_cfg, seed);
      cfg.validate();
      const PointMassSuite suite = make_suite(options.tasks, file_cfg.environment);
      const std::string algo_label = algo_label_of(cfg);
      const std::string selection_label = selection_label_of(cfg);
      const fs::path run_dir = fs::path(options.out_dir) /
                               (algo_label + "_" + selection_label) /
                               tasks_label(options.tasks) /
                               ("seed_" + std::to_string(seed));
      if (!options.quiet) {
        std::cout << "training " << algo_label << "+" << selection_label << " seed "
                  << seed << " -> " << run_dir.string() << "\n";
      }
      run_single_training(cfg, suite, run_dir, algo_label, selection_label,
                          options.tasks, options.checkpoint_every, options.resume,
                          options.quiet);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "train: " << e.what() << "\n";
    return 1;
  }
}

int cmd_validate(const std::string& checkpoint_path, const RunOptions& options) {
  try {
    const RunConfig file_cfg = load_run_config(options.config_path);
    EngineState state = load_checkpoint(checkpoint_path);
    if (options.workers > 0) {
      state.config.workers = options.workers;
    }
    const PointMassSuite suite = make_suite(options.tasks, file_cfg.environment);
    const Engine engine(std::move(state), suite);
    const ValidationResult result = engine.run_validation();
    std::cout << "generation " << result.generation << " champion "
              << result.champion_id << " combined "
              << format_double(result.champion_combined) << "\n";
    for (std::size_t t = 0; t < suite.task_count(); ++t) {
      std::cout << "task " << suite.task_id(t) << ": champion "
                << format_double(result.champion_task_scores[t]) << ", population best "
                << format_double(result.population_best_task[t]) << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "validate: " << e.what() << "\n";
    return 1;
  }
}

namespace {

struct StatsRow {
  int gen;
  int task;
  double best;
  double mean;
  double stddev;
};

struct ValidationRow {
  int gen;
  int task;
  double combined;
  double champion_task;
  double population_best;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  return cells;
}

std::vector<StatsRow> read_stats_csv(const fs::path& path) {
  std::vector<StatsRow> rows;
  std::ifstream in(path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first || line.empty()) {
      first = false;
      continue;
    }
    const auto cells = split_csv(line);
    rows.push_back(StatsRow{std::stoi(cells.at(0)), std::stoi(cells.at(1)),
                            parse_double(cells.at(2)), parse_double(cells.at(3)),
                            parse_double(cells.at(4))});
  }
  return rows;
}

std::vector<ValidationRow> read_validation_csv(const fs::path& path) {
  std::vector<ValidationRow> rows;
  std::ifstream in(path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first || line.empty()) {
      first = false;
      continue;
    }
    const auto cells = split_csv(line);
    rows.push_back(ValidationRow{std::stoi(cells.at(0)), std::stoi(cells.at(1)),
                                 parse_double(cells.at(3)), parse_double(cells.at(4)),
                                 parse_double(cells.at(5))});
  }
  return rows;
}

struct SeedRun {
  std::uint64_t seed;
  fs::path dir;
};

// results/<config>/<tasks>/<seed_*>/ discovery.
std::map<std::string, std::map<std::string, std::vector<SeedRun>>> discover_runs(
    const fs::path& results_dir) {
  std::map<std::string, std::map<std::string, std::vector<SeedRun>>> runs;
  if (!fs::exists(results_dir)) {
    return runs;
  }
  for (const auto& config_entry : fs::directory_iterator(results_dir)) {
    if (!config_entry.is_directory()) {
      continue;
    }
    const std::string config = config_entry.path().filename().string();
    for (const auto& tasks_entry : fs::directory_iterator(config_entry.path())) {
      if (!tasks_entry.is_directory() ||
          tasks_entry.path().filename().string().rfind("tasks_", 0) != 0) {
        continue;
      }
      const std::string tasks = tasks_entry.path().filename().string();
      for (const auto& seed_entry : fs::directory_iterator(tasks_entry.path())) {
        const std::string name = seed_entry.path().filename().string();
        if (!seed_entry.is_directory() || name.rfind("seed_", 0) != 0) {
          continue;
        }
        if (!fs::exists(seed_entry.path() / "stats.csv")) {
          continue;
        }
        runs[config][tasks].push_back(
            SeedRun{std::stoull(name.substr(5)), seed_entry.path()});
      }
    }
  }
  for (auto& [config, by_tasks] : runs) {
    for (auto& [tasks, seeds] : by_tasks) {
      std::sort(seeds.begin(), seeds.end(),
                [](const SeedRun& a, const SeedRun& b) { return a.seed < b.seed; });
    }
  }
  return runs;
}

double population_std(std::span<const double> xs) {
  const double mean = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - mean) * (x - mean);
  }
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& options) {
  try {
    const fs::path results_dir(options.results_dir);
    const fs::path out_dir =
        options.out_dir.empty() ? results_dir / "analysis" : fs::path(options.out_dir);
    fs::create_directories(out_dir);
    const auto runs = discover_runs(results_dir);
    if (runs.empty()) {
      std::cerr << "analyze: no completed runs under " << results_dir << "\n";
      return 1;
    }
    std::ostringstream report;

    // Difficulty table (per config and task set) from training curves:
    // mu_i / sigma_i are the per-generation mean/std across seeds of the
    // population-best score.
    std::string difficulty_csv = "config,tasks,task,auc,coefficient\n";
    report << "== Task difficulty (AUC of training curves) ==\n";
    for (const auto& [config, by_tasks] : runs) {
      for (const auto& [tasks, seeds] : by_tasks) {
        std::map<int, std::vector<std::vector<double>>> per_task_curves;
        std::size_t min_generations = SIZE_MAX;
        for (const SeedRun& run : seeds) {
          std::map<int, std::vector<double>> curves;
          for (const StatsRow& row : read_stats_csv(run.dir / "stats.csv")) {
            curves[row.task].push_back(row.best);
          }
          for (auto& [task, curve] : curves) {
            min_generations = std::min(min_generations, curve.size());
            per_task_curves[task].push_back(std::move(curve));
          }
        }
        if (per_task_curves.empty() || min_generations == 0) {
          report << config << "/" << tasks << ": missing stats\n";
          continue;
        }
        std::vector<int> task_ids;
        std::vector<double> aucs;
        for (const auto& [task, curves] : per_task_curves) {
          TrainingCurve curve;
          for (std::size_t i = 0; i < min_generations; ++i) {
            std::vector<double> at_gen;
            at_gen.reserve(curves.size());
            for (const auto& seed_curve : curves) {
              at_gen.push_back(seed_curve[i]);
            }
            curve.mean.push_back(sample_mean(at_gen));
            curve.stddev.push_back(population_std(at_gen));
          }
          task_ids.push_back(task);
          try {
            aucs.push_back(auc_difficulty(curve));
          } catch (const MetricError&) {
            aucs.push_back(std::numeric_limits<double>::quiet_NaN());
          }
        }
        std::vector<double> finite = aucs;
        const bool all_finite =
            std::all_of(finite.begin(), finite.end(),
                        [](double v) { return std::isfinite(v); });
        std::vector<double> coefficients(aucs.size(),
                                         std::numeric_limits<double>::quiet_NaN());
        if (all_finite && !aucs.empty()) {
          try {
            coefficients = normalize_difficulty(aucs);
          } catch (const MetricError&) {
          }
        }
        for (std::size_t i = 0; i < task_ids.size(); ++i) {
          difficulty_csv += config + "," + tasks + "," + std::to_string(task_ids[i]) +
                            "," + format_double(aucs[i]) + "," +
                            format_double(coefficients[i]) + "\n";
          report << config << "/" << tasks << " task " << task_ids[i] << ": AUC "
                 << format_double(aucs[i]) << " coefficient "
                 << format_double(coefficients[i]) << "\n";
        }
      }
    }
    write_text_file(out_dir / "difficulty.csv", difficulty_csv);

    // Per-task best tables (population best + champion-on-combined).
    std::string table_csv =
        "config,tasks,task,population_best_mean,population_best_std,"
        "champion_mean,champion_std\n";
    report << "\n== Final per-task scores (mean +/- std over seeds) ==\n";
    for (const auto& [config, by_tasks] : runs) {
      for (const auto& [tasks, seeds] : by_tasks) {
        std::map<int, std::vector<double>> pop_best;
        std::map<int, std::vector<double>> champ;
        for (const SeedRun& run : seeds) {
          const auto rows = read_validation_csv(run.dir / "validation.csv");
          if (rows.empty()) {
            continue;
          }
          const int final_gen = rows.back().gen;
          for (const ValidationRow& row : rows) {
            if (row.gen == final_gen) {
              pop_best[row.task].push_back(row.population_best);
              champ[row.task].push_back(row.champion_task);
            }
          }
        }
        for (const auto& [task, values] : pop_best) {
          const auto& champ_values = champ[task];
          table_csv += config + "," + tasks + "," + std::to_string(task) + "," +
                       format_double(sample_mean(values)) + "," +
                       format_double(population_std(values)) + "," +
                       format_double(sample_mean(champ_values)) + "," +
                       format_double(population_std(champ_values)) + "\n";
          report << config << "/" << tasks << " task " << task << ": population best "
                 << format_double(sample_mean(values)) << " +/- "
                 << format_double(population_std(values)) << ", champion "
                 << format_double(sample_mean(champ_values)) << " +/- "
                 << format_double(population_std(champ_values)) << "\n";
        }
      }
    }
    write_text_file(out_dir / "task_table.csv", table_csv);

    // Significance: final combined validation score per seed, every config
    // against the best-median reference, Bonferroni-corrected.
    report << "\n== Significance (final combined validation score) ==\n";
    std::string significance_csv =
        "tasks,reference,config,t,df,p,cohens_d,alpha_corr,significant\n";
    std::set<std::string> task_sets;
    for (const auto& [config, by_tasks] : runs) {
      for (const auto& [tasks, seeds] : by_tasks) {
        task_sets.insert(tasks);
      }
    }
    for (const std::string& tasks : task_sets) {
      std::map<std::string, std::vector<double>> finals;
      for (const auto& [config, by_tasks] : runs) {
        auto it = by_tasks.find(tasks);
        if (it == by_tasks.end()) {
          continue;
        }
        for (const SeedRun& run : it->second) {
          const auto rows = read_validation_csv(run.dir / "validation.csv");
          if (!rows.empty()) {
            finals[config].push_back(rows.back().combined);
          }
        }
      }
      if (finals.size() < 2) {
        report << tasks << ": fewer than two configurations; skipping\n";
        continue;
      }
      std::string reference;
      double best_median = -std::numeric_limits<double>::infinity();
      for (const auto& [config, values] : finals) {
        const double med = median(values);
        if (med > best_median) {
          best_median = med;
          reference = config;
        }
      }
      const int comparisons = static_cast<int>(finals.size()) - 1;
      const double alpha_corr = bonferroni(
          options.alpha, options.bonferroni_n > 0 ? options.bonferroni_n : comparisons);
      for (const auto& [config, values] : finals) {
        if (config == reference) {
          continue;
        }
        if (values.size() < 2 || finals[reference].size() < 2) {
          report << tasks << " " << reference << " vs " << config
                 << ": not enough seeds\n";
          continue;
        }
        const WelchResult w = welch_t(finals[reference], values);
        const double d = cohens_d(finals[reference], values);
        const bool significant = w.p < alpha_corr;
        significance_csv += tasks + "," + reference + "," + config + "," +
                            format_double(w.t) + "," + format_double(w.df) + "," +
                            format_double(w.p) + "," + format_double(d) + "," +
                            format_double(alpha_corr) + "," +
                            (significant ? "yes" : "no") + "\n";
        report << tasks << " " << reference << " vs " << config << ": t "
               << format_double(w.t) << " df " << format_double(w.df) << " p "
               << format_double(w.p) << " d " << format_double(d)
               << (significant ? " (significant)" : " (not significant)") << "\n";
      }
    }
    write_text_file(out_dir / "significance.csv", significance_csv);

    // Cross-task matrix, when env-check artifacts are present.
    const fs::path cross_raw = results_dir / "env_check" / "cross_task_raw.csv";
    if (fs::exists(cross_raw)) {
      std::ifstream in(cross_raw);
      std::string line;
      std::vector<std::vector<double>> raw;
      bool first = true;
      while (std::getline(in, line)) {
        if (first || line.empty()) {
          first = false;
          continue;
        }
        const auto cells = split_csv(line);
        std::vector<double> row;
        for (std::size_t i = 1; i < cells.size(); ++i) {
          row.push_back(parse_double(cells[i]));
        }
        raw.push_back(std::move(row));
      }
      if (!raw.empty() && raw.size() == raw.front().size()) {
        std::vector<double> baselines(raw.size());
        for (std::size_t j = 0; j < raw.size(); ++j) {
          baselines[j] = raw[j][j];
        }
        const CrossTaskMatrix matrix = cross_task_matrix(raw, baselines);
        std::string normalized_csv = "trained\\evaluated";
        for (std::size_t j = 0; j < matrix.n; ++j) {
          normalized_csv += ",task" + std::to_string(j);
        }
        normalized_csv += "\n";
        report << "\n== Cross-task matrix (normalized) ==\n";
        for (std::size_t i = 0; i < matrix.n; ++i) {
          normalized_csv += "task" + std::to_string(i);
          report << "task" << i << ":";
          for (std::size_t j = 0; j < matrix.n; ++j) {
            normalized_csv += "," + format_double(matrix.normalized_at(i, j));
            report << " " << format_double(matrix.normalized_at(i, j)) << " (" +
                          format_double(matrix.raw_at(i, j)) + ")";
          }
          normalized_csv += "\n";
          report << "\n";
        }
        write_text_file(out_dir / "cross_task_normalized.csv", normalized_csv);
      }
    }

    write_text_file(out_dir / "report.txt", report.str());
    if (!options.quiet) {
      std::cout << report.str();
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return 1;
  }
}

int cmd_export(const ExportOptions& options) {
  try {
    const EngineState state = load_checkpoint(options.checkpoint_path);
    Root root;
    if (options.agent_id != 0) {
      bool found = false;
      for (const Root& r : state.store.roots()) {
        if (r.vertex == options.agent_id) {
          root = r;
          found = true;
          break;
        }
      }
      if (!found) {
        throw std::runtime_error("no agent with id " +
                                 std::to_string(options.agent_id));
      }
    } else if (!state.matpg_roots.empty()) {
      root = state.matpg_roots.front();
    } else if (!state.maple_roots.empty()) {
      root = state.maple_roots.front();
    } else {
      throw std::runtime_error("checkpoint holds no roots");
    }

    fs::create_directories(options.out_dir);
    const PrunedAgent agent = prune(root, state.store);
    const std::string stem = "agent_" + std::to_string(root.vertex);
    write_text_file(fs::path(options.out_dir) / (stem + ".dot"), to_dot(agent));
    write_text_file(fs::path(options.out_dir) / (stem + ".txt"),
                    expression_listing(agent));
    if (!options.quiet) {
      std::cout << "exported " << stem << " (" << agent.teams.size() << " teams, "
                << agent.action_vertices.size() << " action vertices, "
                << agent.programs.size() << " programs)\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "export: " << e.what() << "\n";
    return 1;
  }
}

int cmd_env_check(const EnvCheckOptions& options) {
  try {
    const RunConfig file_cfg = load_run_config(options.config_path);
    const fs::path out_dir(options.out_dir);
    fs::create_directories(out_dir);

    const int task_count = kPointMassTaskCount;
    // raw[i][j]: champion trained on task i, evaluated on task j, averaged
    // over seeds.
    std::vector<std::vector<double>> raw(task_count,
                                         std::vector<double>(task_count, 0.0));

    for (int trained = 0; trained < task_count; ++trained) {
      for (const std::uint64_t seed : options.seeds) {
        EvolutionConfig cfg = file_cfg.evolution;
        cfg.maple_proportion = 1.0;  // single-task MAPLE baseline training
        cfg.selection.method = SelectionConfig::Method::Tournament;
        cfg.n_agents = options.agents;
        cfg.n_generations = options.generations;
        cfg.seed = seed;
        if (options.workers > 0) {
          cfg.workers = options.workers;
        }
        const PointMassSuite suite = make_suite({trained}, file_cfg.environment);
        const fs::path run_dir = out_dir / ("task_" + std::to_string(trained)) /
                                 ("seed_" + std::to_string(seed));
        if (!options.quiet) {
          std::cout << "env-check: training task " << trained << " seed " << seed
                    << "\n";
        }
        EvolutionConfig run_cfg = cfg;
        const SingleRunResult result =
            run_single_training(run_cfg, suite, run_dir, "maple", "tournament",
                                {trained}, 0, false, true);

        // Cross-evaluate the champion on every task.
        const EngineState state =
            load_checkpoint((run_dir / "checkpoints" / "final.json").string());
        Root champion;
        bool found = false;
        for (const Root& r : state.store.roots()) {
          if (r.vertex == result.final_validation.champion_id) {
            champion = r;
            found = true;
            break;
          }
        }
        if (!found) {
          throw std::runtime_error("champion missing from final checkpoint");
        }
        for (int evaluated = 0; evaluated < task_count; ++evaluated) {
          const PointMassSuite eval_suite = make_suite({evaluated}, file_cfg.environment);
          const RngStream rng(derive_seed(
              seed, {0xe7a1, static_cast<std::uint64_t>(trained),
                     static_cast<std::uint64_t>(evaluated)}));
          const std::vector<double> scores = evaluate_agent(
              champion, state.store, eval_suite, options.episodes, rng);
          raw[trained][evaluated] += scores[0] / static_cast<double>(options.seeds.size());
        }
      }
    }

    std::vector<double> baselines(task_count);
    for (int j = 0; j < task_count; ++j) {
      baselines[j] = raw[j][j];
    }
    const CrossTaskMatrix matrix = cross_task_matrix(raw, baselines);

    std::string raw_csv = "trained\\evaluated";
    for (int j = 0; j < task_count; ++j) {
      raw_csv += ",task" + std::to_string(j);
    }
    raw_csv += "\n";
    for (int i = 0; i < task_count; ++i) {
      raw_csv += "task" + std::to_string(i);
      for (int j = 0; j < task_count; ++j) {
        raw_csv += "," + format_double(matrix.raw_at(i, j));
      }
      raw_csv += "\n";
    }
    write_text_file(out_dir / "cross_task_raw.csv", raw_csv);

    bool pass = true;
    std::ostringstream report;
    report << "cross-task normalized scores (threshold "
           << format_double(options.threshold) << "):\n";
    for (int i = 0; i < task_count; ++i) {
      report << "trained task" << i << ":";
      for (int j = 0; j < task_count; ++j) {
        const double value = matrix.normalized_at(i, j);
        report << " " << format_double(value);
        if (i != j && !(value < options.threshold)) {
          pass = false;
          report << "(!)";
        }
      }
      report << "\n";
    }
    report << (pass ? "PASS" : "FAIL") << ": off-diagonal transfer "
           << (pass ? "below" : "reaches") << " threshold\n";
    write_text_file(out_dir / "report.txt", report.str());
    if (!options.quiet) {
      std::cout << report.str();
    }
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "env-check: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace matpg
