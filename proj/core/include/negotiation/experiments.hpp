#ifndef NEGOTIATION_EXPERIMENTS_HPP_
#define NEGOTIATION_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "negotiation/engine.hpp"
#include "negotiation/time_agents.hpp"

namespace negotiation::experiments {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Env var naming the default parent directory for run outputs; falls back
// to ./runs.
inline constexpr char kOutputRootEnv[] = "NEGOTIATOR_OUTPUT_ROOT";
std::string default_output_root();

// Scripted-party specs, e.g. "time(c=1,mode=planar)", "linear",
// "boulware(c=0.5)", "conceder(c=2)", "hardliner", "random", "tft(delta=1)",
// "bayes_tft(delta=1)". Parse errors throw ConfigError.
struct AgentSpec {
  enum class Kind { kTime, kHardliner, kRandom, kRelativeTft, kBayesianTft };
  Kind kind = Kind::kTime;
  TimeAgentConfig time{};
  int tft_delta = 1;
  std::string text;  // canonical form for snapshots
};

AgentSpec parse_agent_spec(const std::string& text);
std::unique_ptr<Agent> make_agent(const AgentSpec& spec);

// ---- subcommands -------------------------------------------------------
// Each returns a process exit code: 0 ok, 1 runtime failure (divergence,
// I/O), 2 usage/config errors. Human-readable progress goes to `out`,
// diagnostics to `err`.

struct TrainArgs {
  std::string experiment;     // preset name, or "custom" (config-driven)
  std::string config_path;    // optional INI overrides
  std::string output_dir;     // default: <root>/<experiment>-seed<seed>
  std::uint64_t seed = 0;     // 0 = keep preset/config seed
  int epochs = -1;            // -1 = keep preset/config value
  int eval_games = -1;
  int checkpoint_every = -1;
  std::string resume_path;
  bool paper_scale = false;
  bool overwrite = false;
};

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);
std::vector<std::string> train_experiment_names();

struct PlayArgs {
  std::string checkpoint;     // checkpoint path, or "random" for the
                              // uniform-offer baseline
  std::string opponent = "time(c=1)";
  std::string config_path;    // optional [scenario] overrides
  std::string output_dir;
  int games = -1;             // -1 = 100 desk / 400 paper (100000 random)
  std::uint64_t seed = 1;
  bool paper_scale = false;
  bool overwrite = false;
};

int cmd_play(const PlayArgs& args, std::ostream& out, std::ostream& err);

struct AnalyzeArgs {
  std::string config_path;    // optional [scenario] overrides
  std::string output_dir;
  double nash_step = 0.01;
  bool overwrite = false;
};

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err);

struct SelfplayArgs {
  std::string mode;           // bargain | centipede | multivariate
  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  int epochs = -1;
  int eval_games = -1;
  int checkpoint_every = -1;
  std::string resume_path;
  bool paper_scale = false;
  bool overwrite = false;
};

int cmd_selfplay(const SelfplayArgs& args, std::ostream& out,
                 std::ostream& err);
std::vector<std::string> selfplay_mode_names();

struct ReproduceArgs {
  std::string id;
  std::string output_dir;
  std::uint64_t seed = 1;
  bool paper_scale = false;
  bool overwrite = false;
};

int cmd_reproduce(const ReproduceArgs& args, std::ostream& out,
                  std::ostream& err);
std::vector<std::string> reproduce_ids();

}  // namespace negotiation::experiments

#endif  // NEGOTIATION_EXPERIMENTS_HPP_
