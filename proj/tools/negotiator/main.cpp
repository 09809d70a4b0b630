// negotiator: train, play, and analyze bilateral multi-issue negotiations.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "negotiation/experiments.hpp"

namespace ex = negotiation::experiments;

namespace {

std::string joined(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ", ";
    s += names[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bilateral multi-issue negotiation: actor-critic training, scripted "
      "baselines, and analytic toolkits"};
  app.require_subcommand(1);

  ex::TrainArgs train;
  auto* cmd_train = app.add_subcommand(
      "train", "Train a policy against a scripted opponent (presets: " +
                   joined(ex::train_experiment_names()) + ")");
  cmd_train->add_option("experiment", train.experiment, "Experiment preset")
      ->required();
  cmd_train->add_option("-c,--config", train.config_path,
                        "INI overrides ([scenario]/[opponent]/[train])");
  cmd_train->add_option("-o,--output", train.output_dir, "Output directory");
  cmd_train->add_option("--seed", train.seed,
                        "Master seed (0 keeps the preset/config seed)");
  cmd_train->add_option("--epochs", train.epochs, "Training epochs");
  cmd_train->add_option("--eval-games", train.eval_games,
                        "Frozen-policy evaluation games");
  cmd_train->add_option("--checkpoint-every", train.checkpoint_every,
                        "Also write checkpoint_epoch_N.bin every N epochs");
  cmd_train->add_option("--resume", train.resume_path,
                        "Resume from a checkpoint file");
  cmd_train->add_flag("--paper-scale", train.paper_scale,
                      "Published evaluation scale (400 games)");
  cmd_train->add_flag("--overwrite", train.overwrite,
                      "Replace existing outputs");

  ex::PlayArgs play;
  auto* cmd_play = app.add_subcommand(
      "play", "Play frozen policies from a checkpoint ('random' for the "
              "uniform-offer baseline)");
  cmd_play->add_option("checkpoint", play.checkpoint,
                       "Checkpoint path, or 'random'")
      ->required();
  cmd_play->add_option("--opponent", play.opponent,
                       "Opponent spec, e.g. time(c=1), hardliner, "
                       "tft(delta=1)");
  cmd_play->add_option("-c,--config", play.config_path,
                       "INI overrides ([scenario])");
  cmd_play->add_option("-o,--output", play.output_dir, "Output directory");
  cmd_play->add_option("--games", play.games,
                       "Games to play (offers to sample for 'random')");
  cmd_play->add_option("--seed", play.seed, "Evaluation seed");
  cmd_play->add_flag("--paper-scale", play.paper_scale,
                     "Published evaluation scale (400 games)");
  cmd_play->add_flag("--overwrite", play.overwrite,
                     "Replace existing outputs");

  ex::AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand(
      "analyze", "Analytic toolkit: Pareto frontier, Nash outcome, optimal "
                 "stopping grid, derivatives, game-tree equilibria");
  cmd_analyze->add_option("-c,--config", analyze.config_path,
                          "INI overrides ([scenario])");
  cmd_analyze->add_option("-o,--output", analyze.output_dir,
                          "Output directory");
  cmd_analyze->add_option("--nash-step", analyze.nash_step,
                          "Nash grid-search step");
  cmd_analyze->add_flag("--overwrite", analyze.overwrite,
                        "Replace existing outputs");

  ex::SelfplayArgs selfplay;
  auto* cmd_selfplay = app.add_subcommand(
      "selfplay",
      "Self-play training (modes: " + joined(ex::selfplay_mode_names()) + ")");
  cmd_selfplay->add_option("mode", selfplay.mode, "Self-play mode")
      ->required();
  cmd_selfplay->add_option("-c,--config", selfplay.config_path,
                           "INI overrides ([scenario]/[train])");
  cmd_selfplay->add_option("-o,--output", selfplay.output_dir,
                           "Output directory");
  cmd_selfplay->add_option("--seed", selfplay.seed,
                           "Master seed (0 keeps the preset/config seed)");
  cmd_selfplay->add_option("--epochs", selfplay.epochs, "Training epochs");
  cmd_selfplay->add_option("--eval-games", selfplay.eval_games,
                           "Frozen-policy evaluation games");
  cmd_selfplay->add_option("--checkpoint-every", selfplay.checkpoint_every,
                           "Also write checkpoint_epoch_N.bin every N epochs");
  cmd_selfplay->add_option("--resume", selfplay.resume_path,
                           "Resume from a checkpoint file");
  cmd_selfplay->add_flag("--paper-scale", selfplay.paper_scale,
                         "Published evaluation scale (400 games)");
  cmd_selfplay->add_flag("--overwrite", selfplay.overwrite,
                         "Replace existing outputs");

  ex::ReproduceArgs repro;
  auto* cmd_repro = app.add_subcommand(
      "reproduce",
      "Re-run a packaged study (ids: " + joined(ex::reproduce_ids()) + ")");
  cmd_repro->add_option("id", repro.id, "Study id")->required();
  cmd_repro->add_option("-o,--output", repro.output_dir, "Output directory");
  cmd_repro->add_option("--seed", repro.seed, "Master seed");
  cmd_repro->add_flag("--paper-scale", repro.paper_scale,
                      "Published evaluation scale (400 games)");
  cmd_repro->add_flag("--overwrite", repro.overwrite,
                      "Replace existing outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error.
    return rc == 0 ? ex::kExitOk : ex::kExitUsage;
  }

  if (cmd_train->parsed())
    return ex::cmd_train(train, std::cout, std::cerr);
  if (cmd_play->parsed()) return ex::cmd_play(play, std::cout, std::cerr);
  if (cmd_analyze->parsed())
    return ex::cmd_analyze(analyze, std::cout, std::cerr);
  if (cmd_selfplay->parsed())
    return ex::cmd_selfplay(selfplay, std::cout, std::cerr);
  return ex::cmd_reproduce(repro, std::cout, std::cerr);
}
