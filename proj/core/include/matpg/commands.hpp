#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace matpg {

inline constexpr const char* kEngineVersion = "0.1.0";

/// Options shared by train/validate; CLI flags override config-file values,
/// which override built-in defaults.
struct RunOptions {
  std::string config_path;  // optional JSON run config
  std::string out_dir = "results";
  std::string algo = "matpg";  // "maple" or "matpg"
  bool algo_explicit = false;
  std::string selection = "tournament";  // "tournament" or "lexicase"
  bool selection_explicit = false;
  std::vector<int> tasks = {0, 1, 2};
  bool tasks_explicit = false;
  std::vector<std::uint64_t> seeds = {1};
  bool seeds_explicit = false;
  int generations = -1;  // <0: leave config value
  int agents = -1;
  int workers = -1;
  int checkpoint_every = 0;  // 0 = final checkpoint only
  bool resume = false;
  bool quiet = false;
};

/// Runs one (algorithm, selection) configuration for every requested seed.
/// Outputs land under out_dir/<algo>_<selection>/tasks_<ids>/seed_<n>/.
int cmd_train(const RunOptions& options);

/// Loads a checkpoint and reports a full validation pass on the suite
/// described by the options.
int cmd_validate(const std::string& checkpoint_path, const RunOptions& options);

struct AnalyzeOptions {
  std::string results_dir = "results";
  std::string out_dir;  // defaults to results_dir/analysis
  double alpha = 0.05;
  int bonferroni_n = 0;  // 0: use the number of comparisons
  bool quiet = false;
};

/// Consumes training CSVs and emits the difficulty table, per-task best
/// tables, the significance report, and (when env-check artifacts exist)
/// the cross-task matrix.
int cmd_analyze(const AnalyzeOptions& options);

struct ExportOptions {
  std::string checkpoint_path;
  std::string out_dir = ".";
  std::uint64_t agent_id = 0;  // 0: first MATPG root, else first MAPLE root
  bool quiet = false;
};

/// Writes the pruned-topology DOT file and the expression listing for one
/// agent of a checkpoint.
int cmd_export(const ExportOptions& options);

struct EnvCheckOptions {
  std::string config_path;
  std::string out_dir = "results/env_check";
  int agents = 300;
  int generations = 60;
  std::vector<std::uint64_t> seeds = {1};
  int episodes = 10;  // champion evaluation episodes per task
  double threshold = 0.30;
  int workers = -1;
  bool quiet = false;
};

/// Trains single-task MAPLE populations on every toy task and verifies the
/// task-independence property: champions score below `threshold` of the
/// trained baseline on every untrained task. Exit 0 on pass.
int cmd_env_check(const EnvCheckOptions& options);

}  // namespace matpg
