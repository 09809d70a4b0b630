#include "negotiation/time_agents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace negotiation {

double time_decision_utility(const TimeAgentConfig& cfg, double t, double T) {
  if (!(cfg.c > 0.0)) throw std::invalid_argument("time agent: c must be > 0");
  if (!(cfg.k >= 0.0 && cfg.k <= 1.0))
    throw std::invalid_argument("time agent: k must lie in [0, 1]");
  if (!(T > 0.0) || t < 0.0 || t > T)
    throw std::invalid_argument("time agent: t must lie in [0, T]");
  const double f = cfg.k + (1.0 - cfg.k) * std::pow(t / T, 1.0 / cfg.c);
  return cfg.p_min + (cfg.p_max - cfg.p_min) * (1.0 - f);
}

Offer planar_offer(std::span<const double> weights, double u_d, Rng& rng,
                   int max_tries) {
  const int m = static_cast<int>(weights.size());
  if (m == 0) throw std::invalid_argument("planar_offer: empty weights");
  if (!(u_d >= 0.0 && u_d <= 1.0))
    throw std::invalid_argument("planar_offer: u_d must lie in [0, 1]");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("planar_offer: weight sum must be positive");

  if (u_d >= 1.0) return Offer(std::vector<double>(m, 1.0));
  if (u_d <= 0.0) return Offer(std::vector<double>(m, 0.0));

  // Solve for the highest-weight coordinate so the division is well posed.
  int solve =
      static_cast<int>(std::max_element(weights.begin(), weights.end()) -
                       weights.begin());
  const double target = u_d * total;
  std::vector<double> x(m);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    double partial = 0.0;
    for (int i = 0; i < m; ++i) {
      if (i == solve) continue;
      x[i] = rng.uniform();
      partial += weights[i] * x[i];
    }
    const double rest = (target - partial) / weights[solve];
    if (rest >= 0.0 && rest <= 1.0) {
      x[solve] = rest;
      return Offer(x);
    }
  }
  return preference_concession_offer(weights, u_d, 0.0, rng);
}

Offer preference_concession_offer(std::span<const double> weights, double u_d,
                                  double sigma, Rng& rng) {
  const int m = static_cast<int>(weights.size());
  if (m == 0) throw std::invalid_argument("preference_concession_offer: empty weights");
  if (!(u_d >= 0.0 && u_d <= 1.0))
    throw std::invalid_argument("preference_concession_offer: u_d must lie in [0, 1]");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0))
    throw std::invalid_argument("preference_concession_offer: weight sum must be positive");

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] < weights[b]; });

  const double target = u_d * total;
  std::vector<double> x(m, 1.0);
  double kept = total;
  for (int j : order) {
    if (weights[j] <= 0.0) continue;
    if (kept - weights[j] >= target) {
      x[j] = 0.0;
      kept -= weights[j];
    } else {
      x[j] = (target - (kept - weights[j])) / weights[j];
      break;
    }
  }
  if (sigma > 0.0) {
    for (auto& v : x) v = std::clamp(v + sigma * rng.normal(), 0.0, 1.0);
  }
  return Offer(std::move(x));
}

Offer TimeAgent::propose(int round, Rng& rng) {
  const double u =
      time_decision_utility(cfg_, round, scenario_->deadline);
  const auto& w = scenario_->weights(side_);
  const double u_d = std::clamp(u, 0.0, 1.0);
  if (cfg_.mode == OfferMode::kPlanar) return planar_offer(w, u_d, rng);
  return preference_concession_offer(w, u_d, cfg_.noise_sigma, rng);
}

bool TimeAgent::decide(const Offer& incoming, int round, Rng& rng) {
  const double u = time_decision_utility(cfg_, round, scenario_->deadline);
  const Offer mine = received_from(incoming);
  const double got = normalized_utility(mine.shares, scenario_->weights(side_),
                                        1.0, 1, scenario_->deadline);
  return got >= u && got >= scenario_->reserve;
}

Offer hardliner_offer(int issues) {
  return Offer(std::vector<double>(issues, 1.0));
}

Offer random_walker_offer(int issues, Rng& rng) {
  std::vector<double> x(issues);
  for (auto& v : x) v = rng.uniform();
  return Offer(std::move(x));
}

Offer Hardliner::propose(int, Rng&) { return hardliner_offer(scenario_->issues()); }

bool Hardliner::decide(const Offer& incoming, int, Rng&) {
  const Offer mine = received_from(incoming);
  const double got = normalized_utility(mine.shares, scenario_->weights(side_),
                                        1.0, 1, scenario_->deadline);
  return got >= 1.0 - 1e-12;
}

Offer RandomWalker::propose(int, Rng& rng) {
  return random_walker_offer(scenario_->issues(), rng);
}

bool RandomWalker::decide(const Offer& incoming, int, Rng& rng) {
  const Offer mine = received_from(incoming);
  const double got = normalized_utility(mine.shares, scenario_->weights(side_),
                                        1.0, 1, scenario_->deadline);
  return got >= rng.uniform();
}

}  // namespace negotiation
