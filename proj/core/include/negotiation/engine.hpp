#ifndef NEGOTIATION_ENGINE_HPP_
#define NEGOTIATION_ENGINE_HPP_

#include "negotiation/rng.hpp"
#include "negotiation/scenario.hpp"
#include "negotiation/transcript.hpp"

namespace negotiation {

// A negotiating party. The engine calls begin_game once per game, then
// alternates propose/decide. observe is invoked with every opponent offer
// (post-clamp) so stateful agents can track concessions.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_game(const Scenario& scenario, Side side) {
    scenario_ = &scenario;
    side_ = side;
  }
  virtual Offer propose(int round, Rng& rng) = 0;
  virtual bool decide(const Offer& incoming, int round, Rng& rng) = 0;
  virtual void observe(const Offer& opponent_offer, int round) {}

 protected:
  const Scenario* scenario_ = nullptr;
  Side side_ = Side::kA;
};

// Alternating offers starting with agent_a. Round t: the current proposer
// offers, the responder decides; a rejection makes the responder the next
// round's proposer. No acceptance by the deadline ends in a conflict deal.
// Out-of-range offer components are clamped into [0,1] (NaN becomes 0) with
// a warning event recorded. Rewards are left to the consuming module.
Transcript run_negotiation(Agent& agent_a, Agent& agent_b,
                           const Scenario& scenario, Rng& rng);

}  // namespace negotiation

#endif  // NEGOTIATION_ENGINE_HPP_
