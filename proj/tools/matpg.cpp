// Command-line entry point: train, validate, analyze, export, env-check.

#include <CLI11.hpp>

#include "matpg/commands.hpp"

namespace {

void add_run_flags(CLI::App* cmd, matpg::RunOptions& options) {
  cmd->add_option("--config", options.config_path, "JSON run configuration file");
  cmd->add_option("--out", options.out_dir, "output directory root");
  cmd->add_option("--algo", options.algo, "algorithm: maple or matpg")
      ->check(CLI::IsMember({"maple", "matpg"}));
  cmd->add_option("--selection", options.selection,
                  "selection method: tournament or lexicase")
      ->check(CLI::IsMember({"tournament", "lexicase"}));
  cmd->add_option("--tasks", options.tasks, "task ids (easiest first)")
      ->delimiter(',');
  cmd->add_option("--generations", options.generations, "generation count override");
  cmd->add_option("--agents", options.agents, "population size override");
  cmd->add_option("--workers", options.workers, "evaluation worker threads");
  cmd->add_flag("--quiet", options.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MATPG/MAPLE evolution engine for multi-task continuous control"};
  app.require_subcommand(1);

  matpg::RunOptions train_options;
  CLI::App* train = app.add_subcommand("train", "run one training configuration");
  add_run_flags(train, train_options);
  train->add_option("--seed", train_options.seeds, "seed (repeatable)")->delimiter(',');
  train->add_option("--seeds", train_options.seeds, "comma-separated seed list")
      ->delimiter(',');
  train->add_option("--checkpoint-every", train_options.checkpoint_every,
                    "checkpoint cadence in generations (0 = final only)");
  train->add_flag("--resume", train_options.resume,
                  "resume from the last checkpoint if present");

  matpg::RunOptions validate_options;
  std::string validate_checkpoint;
  CLI::App* validate = app.add_subcommand("validate", "validate a checkpoint");
  validate->add_option("checkpoint", validate_checkpoint, "checkpoint file")
      ->required();
  add_run_flags(validate, validate_options);

  matpg::AnalyzeOptions analyze_options;
  CLI::App* analyze = app.add_subcommand("analyze", "post-hoc analysis of results");
  analyze->add_option("results", analyze_options.results_dir, "results directory");
  analyze->add_option("--out", analyze_options.out_dir, "analysis output directory");
  analyze->add_option("--alpha", analyze_options.alpha, "significance level");
  analyze->add_option("--bonferroni-n", analyze_options.bonferroni_n,
                      "override the Bonferroni test count");
  analyze->add_flag("--quiet", analyze_options.quiet, "suppress report output");

  matpg::ExportOptions export_options;
  CLI::App* export_cmd =
      app.add_subcommand("export", "export an agent's topology and programs");
  export_cmd->add_option("checkpoint", export_options.checkpoint_path, "checkpoint file")
      ->required();
  export_cmd->add_option("--out", export_options.out_dir, "output directory");
  export_cmd->add_option("--agent", export_options.agent_id,
                         "agent id (default: first MATPG root)");
  export_cmd->add_flag("--quiet", export_options.quiet, "suppress output");

  matpg::EnvCheckOptions env_check_options;
  CLI::App* env_check =
      app.add_subcommand("env-check", "verify toy-suite task independence");
  env_check->add_option("--config", env_check_options.config_path,
                        "JSON run configuration file");
  env_check->add_option("--out", env_check_options.out_dir, "output directory");
  env_check->add_option("--agents", env_check_options.agents,
                        "population size per single-task training");
  env_check->add_option("--generations", env_check_options.generations,
                        "training budget in generations");
  env_check->add_option("--seeds", env_check_options.seeds, "seed list")
      ->delimiter(',');
  env_check->add_option("--episodes", env_check_options.episodes,
                        "champion evaluation episodes per task");
  env_check->add_option("--threshold", env_check_options.threshold,
                        "maximum allowed normalized transfer score");
  env_check->add_option("--workers", env_check_options.workers,
                        "evaluation worker threads");
  env_check->add_flag("--quiet", env_check_options.quiet, "suppress output");

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    train_options.algo_explicit = train->count("--algo") > 0;
    train_options.selection_explicit = train->count("--selection") > 0;
    return matpg::cmd_train(train_options);
  }
  if (validate->parsed()) {
    validate_options.algo_explicit = validate->count("--algo") > 0;
    validate_options.selection_explicit = validate->count("--selection") > 0;
    return matpg::cmd_validate(validate_checkpoint, validate_options);
  }
  if (analyze->parsed()) {
    return matpg::cmd_analyze(analyze_options);
  }
  if (export_cmd->parsed()) {
    return matpg::cmd_export(export_options);
  }
  if (env_check->parsed()) {
    return matpg::cmd_env_check(env_check_options);
  }
  return 1;
}
