#ifndef NEGOTIATION_TRAINING_LOOPS_HPP_
#define NEGOTIATION_TRAINING_LOOPS_HPP_

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "negotiation/engine.hpp"
#include "negotiation/neural/checkpoint.hpp"
#include "negotiation/time_agents.hpp"
#include "negotiation/training/updates.hpp"

namespace negotiation::training {

// Policy-net input features. Deciding sees the shares it would receive plus
// the normalized round; proposing sees the shares last offered to it (zeros
// before any opponent offer) plus the normalized round.
std::vector<double> accept_features(const Offer& incoming, int round,
                                    const Scenario& scenario);
std::vector<double> offer_features(const Offer* last_received, int round,
                                   const Scenario& scenario);

// Mini-game discrete action set: the proposer keeps 0.9 (rational split) or
// 0.5 (fair split) of the single issue.
inline constexpr std::array<double, 2> kMinigameKeep{0.9, 0.5};

// A negotiating party backed by up to three nets, any of which may be
// absent: an accept net (absent -> always reject), an offer net, and a
// categorical mini-game choice net (absent -> hardline proposals). Every
// sampled decision is recorded for the per-episode update; offer records
// keep the raw, unclamped samples.
class NeuralParty : public Agent {
 public:
  neural::ActorCriticNet* accept_net = nullptr;
  neural::OfferNet* offer_net = nullptr;
  neural::ActorCriticNet* choice_net = nullptr;

  void begin_game(const Scenario& scenario, Side side) override;
  Offer propose(int round, Rng& rng) override;
  bool decide(const Offer& incoming, int round, Rng& rng) override;
  void observe(const Offer& opponent_offer, int round) override;

  std::vector<BinaryRecord> accept_records;
  std::vector<OfferRecord> offer_records;
  std::vector<BinaryRecord> choice_records;

 private:
  std::optional<Offer> last_received_;
};

// Per-epoch log row; p1 is the engine's side A. Columns that do not apply
// to a mode (e.g. scale stats for categorical policies) are NaN. Epochs are
// 1-based and keep counting across resumed runs.
struct EpochMetrics {
  int epoch = 0;
  double reward_p1 = 0.0;
  double reward_p2 = 0.0;
  double playout_time = 0.0;
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  std::array<double, 3> mean_sigma{};
};

extern const char kMetricsSchema[];
void write_metrics_csv(std::ostream& os, std::span<const EpochMetrics> rows);

// Summary of a batch of frozen-policy games, the Table-style column set.
// Geometry statistics (bid distribution, Nash distance) are computed over
// the undiscounted outcome points of accepted deals; with no accepted deal
// (or zero games) they are NaN.
struct EvalSummary {
  int games = 0;
  double mean_reward_p1 = 0.0;
  double mean_reward_p2 = 0.0;
  double mean_time = 0.0;
  double bid_distribution = 0.0;
  double nash_distance = 0.0;
};

struct EvalResult {
  std::vector<Transcript> transcripts;
  EvalSummary summary;
};

// Plays games with rewards assigned; agents are not updated.
EvalResult evaluate_games(Agent& agent_a, Agent& agent_b,
                          const Scenario& scenario, int games, Rng& rng);

// Knobs shared by every training mode. The master seed is split into
// dedicated streams (net init, training playouts, evaluation) so resumed
// runs continue the training stream exactly. Early stopping fires when the
// playout-time standard deviation over the trailing window drops below the
// threshold; a threshold of 0 disables it.
struct CommonTrainConfig {
  int epochs = 1000;
  neural::AdamConfig adam{};
  std::uint64_t master_seed = 1;
  int eval_games = 100;
  int early_stop_window = 500;
  double early_stop_std = 0.0;
  int checkpoint_every = 0;  // 0 = only at termination
  std::function<void(const neural::Checkpoint&, int epoch)> on_checkpoint;
};

struct TrainOutcome {
  std::vector<EpochMetrics> metrics;
  neural::Checkpoint checkpoint;  // state right after the last trained epoch
  EvalResult eval;
  int conflict_episodes = 0;      // training games that hit the deadline
  bool halted = false;            // stopped on a non-finite loss
  bool early_stopped = false;
  std::vector<std::string> warnings;
};

// Accept-net training: the scripted opponent opens every game, the learner
// decides each incoming offer and counter-offers hardline.
struct AcceptTrainConfig {
  Scenario scenario = Scenario::default_multivariate();
  TimeAgentConfig opponent{};
  int hidden = 512;
  CommonTrainConfig common{.epochs = 8000, .adam = {.lr = 5e-5}};
};

// Offer-net training: the learner opens every game and proposes from the
// configured head; it never accepts, so games end on the opponent's
// acceptance or the deadline.
struct OfferTrainConfig {
  Scenario scenario = Scenario::default_multivariate();
  TimeAgentConfig opponent{};
  neural::OfferNetConfig net{};
  CommonTrainConfig common{.epochs = 4000, .adam = {.lr = 1e-4}};
};

enum class TftVariant { kRelative, kBayesian };

// Tit-for-tat training: the TFT opponent opens and never accepts, so games
// end only on the learner's acceptance (or the deadline); the learner
// trains both its accept and offer nets.
struct TftTrainConfig {
  Scenario scenario = Scenario::default_multivariate();
  TftVariant variant = TftVariant::kRelative;
  int tft_delta = 1;
  int accept_hidden = 512;
  neural::OfferNetConfig net{};
  CommonTrainConfig common{.epochs = 5000, .adam = {.lr = 1e-4}};
};

// Univariate self-play mini-game: two independent (choice net, accept net)
// pairs pick from the discrete action set each round. Bargain flavor
// shrinks the pie (delta 0.9); centipede flavor grows it (delta 1.3).
struct MinigameTrainConfig {
  bool centipede = false;
  double discount = 0.9;
  int hidden = 128;
  CommonTrainConfig common{.epochs = 3000, .adam = {.lr = 1e-4}};
};

// Multivariate self-play with split roles: P1 owns an offer net and always
// rejects; P2 owns an accept net and proposes hardline pro forma.
struct MultivariateTrainConfig {
  Scenario scenario;  // defaulted to the standard weights with delta 0.95
  neural::OfferNetConfig net{};
  int accept_hidden = 512;
  CommonTrainConfig common{.epochs = 3000, .adam = {.lr = 1e-4}};

  MultivariateTrainConfig() {
    scenario = Scenario::default_multivariate();
    scenario.discount = 0.95;
  }
};

// Each mode returns the per-epoch log, the terminal checkpoint, and a
// frozen-policy evaluation. Passing a checkpoint resumes from it (the
// architecture must match the config or the run throws).
TrainOutcome train_accept(const AcceptTrainConfig& cfg,
                          const neural::Checkpoint* resume = nullptr);
TrainOutcome train_offer(const OfferTrainConfig& cfg,
                         const neural::Checkpoint* resume = nullptr);
TrainOutcome train_tft(const TftTrainConfig& cfg,
                       const neural::Checkpoint* resume = nullptr);
TrainOutcome train_minigame(const MinigameTrainConfig& cfg,
                            const neural::Checkpoint* resume = nullptr);
TrainOutcome train_multivariate(const MultivariateTrainConfig& cfg,
                                const neural::Checkpoint* resume = nullptr);

}  // namespace negotiation::training

#endif  // NEGOTIATION_TRAINING_LOOPS_HPP_
