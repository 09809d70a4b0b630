#include "negotiation/scenario.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace negotiation {

Offer received_from(const Offer& proposed) {
  Offer r = proposed;
  for (auto& s : r.shares) s = 1.0 - s;
  return r;
}

double Scenario::weight_sum(Side s) const {
  const auto& w = weights(s);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

void Scenario::validate() const {
  if (weights_a.empty() || weights_a.size() != weights_b.size())
    throw std::invalid_argument("scenario: weight vectors must be non-empty and equal-sized");
  for (double w : weights_a)
    if (!(w >= 0.0)) throw std::invalid_argument("scenario: weights_a must be non-negative");
  for (double w : weights_b)
    if (!(w >= 0.0)) throw std::invalid_argument("scenario: weights_b must be non-negative");
  if (!(weight_sum(Side::kA) > 0.0) || !(weight_sum(Side::kB) > 0.0))
    throw std::invalid_argument("scenario: weight sums must be positive");
  if (deadline < 1) throw std::invalid_argument("scenario: deadline must be >= 1");
  if (!(discount > 0.0)) throw std::invalid_argument("scenario: discount must be positive");
  if (discount > 1.0 && !centipede)
    throw std::invalid_argument("scenario: discount > 1 requires centipede mode");
  if (!(reserve >= 0.0 && reserve <= 1.0))
    throw std::invalid_argument("scenario: reserve must lie in [0, 1]");
  if (!(conflict_penalty >= 0.0))
    throw std::invalid_argument("scenario: conflict penalty must be non-negative");
}

Scenario Scenario::default_multivariate() { return Scenario{}; }

Scenario Scenario::univariate(double discount, bool centipede) {
  Scenario s;
  s.weights_a = {1.0};
  s.weights_b = {1.0};
  s.discount = discount;
  s.centipede = centipede;
  return s;
}

double utility(std::span<const double> shares, std::span<const double> weights,
               double delta, int round, int deadline) {
  if (shares.size() != weights.size())
    throw std::invalid_argument("utility: shares/weights size mismatch");
  if (round > deadline) return 0.0;
  double base = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) base += weights[i] * shares[i];
  return std::pow(delta, round - 1) * base;
}

double normalized_utility(std::span<const double> shares,
                          std::span<const double> weights, double delta,
                          int round, int deadline) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("normalized_utility: weight sum must be positive");
  return utility(shares, weights, delta, round, deadline) / total;
}

}  // namespace negotiation
