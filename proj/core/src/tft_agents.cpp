#include "negotiation/tft_agents.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "negotiation/simplex.hpp"
#include "negotiation/time_agents.hpp"

namespace negotiation {

Offer relative_tft_offer(const TftState& state, const TftConfig& cfg,
                         int issues) {
  if (cfg.delta < 1) throw std::invalid_argument("relative tft: delta must be >= 1");
  const int k = static_cast<int>(state.opponent_offers.size());
  if (k < 2 * cfg.delta || state.own_offers.empty())
    return hardliner_offer(issues);

  const Offer& earlier = state.opponent_offers[k - 1 - cfg.delta];
  const Offer& later = state.opponent_offers[k - cfg.delta];
  const Offer& own_prev = state.own_offers.back();

  std::vector<double> next(issues);
  for (int j = 0; j < issues; ++j) {
    const double denom = later[j];
    const double ratio = denom != 0.0 ? earlier[j] / denom : 1.0;
    const double lo = j < static_cast<int>(cfg.min_shares.size())
                          ? cfg.min_shares[j] : 0.0;
    const double hi = j < static_cast<int>(cfg.max_shares.size())
                          ? cfg.max_shares[j] : 1.0;
    next[j] = std::clamp(ratio * own_prev[j], lo, hi);
  }
  return Offer(std::move(next));
}

void RelativeTftAgent::begin_game(const Scenario& scenario, Side side) {
  Agent::begin_game(scenario, side);
  state_ = {};
}

Offer RelativeTftAgent::propose(int, Rng&) {
  Offer next = relative_tft_offer(state_, cfg_, scenario_->issues());
  state_.own_offers.push_back(next);
  return next;
}

bool RelativeTftAgent::decide(const Offer&, int, Rng&) { return false; }

void RelativeTftAgent::observe(const Offer& opponent_offer, int) {
  state_.opponent_offers.push_back(opponent_offer);
}

std::vector<double> estimate_opponent_weights(std::span<const Offer> offers,
                                              double scale) {
  if (offers.empty())
    throw std::invalid_argument("estimate_opponent_weights: no offers");
  const int m = static_cast<int>(offers.front().size());
  std::vector<double> mean(m, 0.0);
  for (const Offer& o : offers) {
    const double sum = std::accumulate(o.shares.begin(), o.shares.end(), 0.0);
    for (int j = 0; j < m; ++j)
      mean[j] += sum > 0.0 ? o[j] / sum : 1.0 / m;
  }
  for (double& v : mean) v *= scale / offers.size();
  return mean;
}

BayesianOfferResult bayesian_tft_offer(std::span<const double> own_weights,
                                       std::span<const double> estimate,
                                       double target) {
  const int m = static_cast<int>(own_weights.size());
  if (static_cast<int>(estimate.size()) != m)
    throw std::invalid_argument("bayesian_tft_offer: estimate arity mismatch");
  // estimate . (1 - x) = const - estimate . x, so maximize -estimate . x.
  std::vector<double> objective(m);
  for (int j = 0; j < m; ++j) objective[j] = -estimate[j];
  std::vector<std::vector<double>> lhs{
      std::vector<double>(own_weights.begin(), own_weights.end())};
  std::vector<double> rhs{target};
  SimplexResult lp = simplex_solve(objective, lhs, rhs);
  BayesianOfferResult res;
  res.feasible = lp.optimal();
  if (res.feasible) res.offer = Offer(std::move(lp.x));
  return res;
}

void BayesianTftAgent::begin_game(const Scenario& scenario, Side side) {
  Agent::begin_game(scenario, side);
  target_ = scenario.weight_sum(side);
  estimate_.assign(scenario.issues(),
                   scenario.weight_sum(side) / scenario.issues());
  opponent_offers_.clear();
}

Offer BayesianTftAgent::propose(int, Rng&) {
  const auto& w = scenario_->weights(side_);
  const double total = scenario_->weight_sum(side_);
  const double target = std::clamp(target_, 0.0, total);
  BayesianOfferResult r = bayesian_tft_offer(w, estimate_, target);
  if (!r.feasible) return hardliner_offer(scenario_->issues());
  return r.offer;
}

bool BayesianTftAgent::decide(const Offer&, int, Rng&) { return false; }

void BayesianTftAgent::observe(const Offer& opponent_offer, int) {
  opponent_offers_.push_back(opponent_offer);
  const auto& w = scenario_->weights(side_);
  const double total = scenario_->weight_sum(side_);
  estimate_ = estimate_opponent_weights(opponent_offers_, total);

  const int k = static_cast<int>(opponent_offers_.size());
  if (k >= delta_ + 1) {
    auto value = [&](const Offer& o) {
      double v = 0.0;
      for (std::size_t j = 0; j < o.size(); ++j) v += w[j] * o[j];
      return v;
    };
    const double later = value(opponent_offers_[k - delta_]);
    const double earlier = value(opponent_offers_[k - delta_ - 1]);
    const double ratio = earlier > 0.0 ? later / earlier : 1.0;
    target_ = std::clamp(target_ * ratio, scenario_->reserve * total, total);
  }
}

}  // namespace negotiation
