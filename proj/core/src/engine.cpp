#include "negotiation/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace negotiation {

namespace {

bool clamp_offer(Offer& o) {
  bool clamped = false;
  for (auto& s : o.shares) {
    if (std::isnan(s)) {
      s = 0.0;
      clamped = true;
    } else if (s < 0.0) {
      s = 0.0;
      clamped = true;
    } else if (s > 1.0) {
      s = 1.0;
      clamped = true;
    }
  }
  return clamped;
}

}  // namespace

Transcript run_negotiation(Agent& agent_a, Agent& agent_b,
                           const Scenario& scenario, Rng& rng) {
  scenario.validate();
  const int m = scenario.issues();

  Transcript t;
  t.issues = m;
  agent_a.begin_game(scenario, Side::kA);
  agent_b.begin_game(scenario, Side::kB);

  Agent* proposer = &agent_a;
  Agent* responder = &agent_b;
  Side proposer_side = Side::kA;

  for (int round = 1; round <= scenario.deadline; ++round) {
    Offer offer = proposer->propose(round, rng);
    if (static_cast<int>(offer.size()) != m)
      throw std::invalid_argument("run_negotiation: offer has wrong issue count");
    Offer raw = offer;
    if (clamp_offer(offer))
      t.events.push_back({round, proposer_side, EventType::kClampWarning, raw});
    t.events.push_back({round, proposer_side, EventType::kOffer, offer});
    responder->observe(offer, round);

    const bool accept = responder->decide(offer, round, rng);
    t.events.push_back({round, other(proposer_side),
                        accept ? EventType::kAccept : EventType::kReject,
                        offer});
    if (accept) {
      t.end_state = EndState::kAccepted;
      t.end_round = round;
      t.final_offer = offer;
      t.final_proposer = proposer_side;
      return t;
    }
    std::swap(proposer, responder);
    proposer_side = other(proposer_side);
  }

  t.end_state = EndState::kConflictDeal;
  t.end_round = scenario.deadline;
  return t;
}

}  // namespace negotiation
