#include "negotiation/training/rewards.hpp"

namespace negotiation::training {

std::pair<double, double> assign_rewards(Transcript& transcript,
                                         const Scenario& scenario) {
  double ra = -scenario.conflict_penalty;
  double rb = -scenario.conflict_penalty;
  if (transcript.accepted() && transcript.end_round < scenario.deadline) {
    const Offer& kept = transcript.final_offer;
    const Offer got = received_from(kept);
    const Side p = transcript.final_proposer;
    const double up = utility(kept.shares, scenario.weights(p),
                              scenario.discount, transcript.end_round,
                              scenario.deadline);
    const double ur = utility(got.shares, scenario.weights(other(p)),
                              scenario.discount, transcript.end_round,
                              scenario.deadline);
    ra = p == Side::kA ? up : ur;
    rb = p == Side::kA ? ur : up;
  }
  transcript.reward_a = ra;
  transcript.reward_b = rb;
  return {ra, rb};
}

}  // namespace negotiation::training
