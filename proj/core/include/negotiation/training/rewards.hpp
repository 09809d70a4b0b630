#ifndef NEGOTIATION_TRAINING_REWARDS_HPP_
#define NEGOTIATION_TRAINING_REWARDS_HPP_

#include "negotiation/scenario.hpp"
#include "negotiation/transcript.hpp"

namespace negotiation::training {

// Terminal reward scheme: an acceptance strictly before the deadline pays
// each side its discounted utility of the final division; reaching the
// deadline (a conflict deal, or an acceptance in the very last round) pays
// both sides -K. Writes reward_a/reward_b into the transcript and returns
// them as (a, b).
std::pair<double, double> assign_rewards(Transcript& transcript,
                                         const Scenario& scenario);

}  // namespace negotiation::training

#endif  // NEGOTIATION_TRAINING_REWARDS_HPP_
