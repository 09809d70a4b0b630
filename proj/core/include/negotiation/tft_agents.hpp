#ifndef NEGOTIATION_TFT_AGENTS_HPP_
#define NEGOTIATION_TFT_AGENTS_HPP_

#include <span>
#include <vector>

#include "negotiation/engine.hpp"

namespace negotiation {

struct TftConfig {
  int delta = 1;  // response delay in opponent offers
  std::vector<double> min_shares;  // per-issue clamp; defaults to 0
  std::vector<double> max_shares;  // per-issue clamp; defaults to 1
};

struct TftState {
  std::vector<Offer> opponent_offers;
  std::vector<Offer> own_offers;
};

// Relative tit-for-tat. Next own share per issue j:
//   clamp(opp[t - 2 delta][j] / opp[t - 2 delta + 2][j] * own[t-1][j],
//         min_j, max_j)
// where the two opponent offers are consecutive ones starting 2 delta rounds
// back. A zero denominator contributes ratio 1. Before 2 delta opponent
// offers (or any own offer) are recorded, opens hardline.
Offer relative_tft_offer(const TftState& state, const TftConfig& cfg,
                         int issues);

class RelativeTftAgent : public Agent {
 public:
  explicit RelativeTftAgent(TftConfig cfg = {}) : cfg_(std::move(cfg)) {}
  void begin_game(const Scenario& scenario, Side side) override;
  Offer propose(int round, Rng& rng) override;
  bool decide(const Offer& incoming, int round, Rng& rng) override;
  void observe(const Offer& opponent_offer, int round) override;
  const TftState& state() const { return state_; }

 private:
  TftConfig cfg_;
  TftState state_;
};

// Mean of sum-normalized opponent offers scaled by the utility scale (the
// scenario weight sum). An all-zero offer contributes a uniform vector.
std::vector<double> estimate_opponent_weights(std::span<const Offer> offers,
                                              double scale);

// Maximize estimate . (1 - x) subject to own_weights . x = target and
// 0 <= x <= 1, via the simplex solver. target is an unnormalized utility.
struct BayesianOfferResult {
  bool feasible = false;
  Offer offer;
};
BayesianOfferResult bayesian_tft_offer(std::span<const double> own_weights,
                                       std::span<const double> estimate,
                                       double target);

// Bayesian tit-for-tat: keeps an unnormalized decision-utility target that
// is multiplied by the opponent's concession ratio (later offer over earlier
// offer, both valued with our own weights) and clamped into
// [reserve * sum(w), sum(w)]; offers come from the simplex LP against the
// estimated opponent weights.
class BayesianTftAgent : public Agent {
 public:
  explicit BayesianTftAgent(int delta = 1) : delta_(delta) {}
  void begin_game(const Scenario& scenario, Side side) override;
  Offer propose(int round, Rng& rng) override;
  bool decide(const Offer& incoming, int round, Rng& rng) override;
  void observe(const Offer& opponent_offer, int round) override;
  double target() const { return target_; }
  const std::vector<double>& estimate() const { return estimate_; }

 private:
  int delta_;
  double target_ = 0.0;
  std::vector<double> estimate_;
  std::vector<Offer> opponent_offers_;
};

}  // namespace negotiation

#endif  // NEGOTIATION_TFT_AGENTS_HPP_
