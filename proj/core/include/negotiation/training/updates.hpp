#ifndef NEGOTIATION_TRAINING_UPDATES_HPP_
#define NEGOTIATION_TRAINING_UPDATES_HPP_

#include <span>
#include <vector>

#include "negotiation/neural/adam.hpp"
#include "negotiation/neural/nets.hpp"

namespace negotiation::training {

// One decision taken by a categorical (accept / mini-game offer) policy:
// the features it saw and the sampled action index.
struct BinaryRecord {
  std::vector<double> input;
  int action = 0;
};

// One continuous offer emitted by an offer policy: the features it saw and
// the raw per-issue samples, kept unclamped so the stored action stays in
// the support the log-density was evaluated on.
struct OfferRecord {
  std::vector<double> input;
  std::vector<double> actions;
};

// Losses and head statistics summed over the records of one episode.
struct UpdateStats {
  double critic_loss = 0.0;           // sum of TD^2
  double actor_loss = 0.0;            // sum of the actor surrogate
  std::vector<double> scale_sum;      // per-issue entropy-argument sums
  int records = 0;
  int scale_evals = 0;                // per-issue scale outputs seen
  int scale_floor_hits = 0;           // of those, saturated at the floor

  double mean_critic_loss() const;
  double mean_actor_loss() const;
  std::vector<double> mean_scale() const;
};

// TD = reward - value. The critic head minimizes TD^2; the actor surrogate
// is -log pi(a) * TD (categorical) or the per-issue sum of
// -(log_prob + entropy_term(scale)) * TD (continuous heads), with TD held
// constant inside the actor term. Each call recomputes the forward pass at
// the current parameters and accumulates d(surrogate)/d(params) into grads.
void accumulate_binary_record(const neural::ActorCriticNet& net,
                              const BinaryRecord& record, double reward,
                              std::vector<std::vector<double>>& grads,
                              UpdateStats& stats);

void accumulate_offer_record(const neural::OfferNet& net,
                             const OfferRecord& record, double reward,
                             std::vector<std::vector<double>>& grads,
                             UpdateStats& stats);

// The entropy argument for a head's scale output: sigma / gamma directly for
// location-scale heads, sqrt(variance) for beta heads.
double head_entropy_scale(neural::HeadKind head, double p1, double p2);

// Mean-normalizes the accumulated gradients by the record count and takes
// one Adam step. No-op on an empty episode.
void apply_episode_update(neural::AdamState& adam,
                          std::vector<neural::LayerStack*> stacks,
                          std::vector<std::vector<double>>& grads,
                          int records);

void zero_grads(std::vector<std::vector<double>>& grads);

}  // namespace negotiation::training

#endif  // NEGOTIATION_TRAINING_UPDATES_HPP_
