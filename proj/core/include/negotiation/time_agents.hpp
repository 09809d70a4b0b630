#ifndef NEGOTIATION_TIME_AGENTS_HPP_
#define NEGOTIATION_TIME_AGENTS_HPP_

#include <span>

#include "negotiation/engine.hpp"

namespace negotiation {

enum class OfferMode { kPlanar, kPreference };

// Time-based concession family. F(t) = k + (1-k) * (t/T)^(1/c);
// u(t) = p_min + (p_max - p_min) * (1 - F(t)). Boulware c < 1, linear c = 1,
// Conceder c > 1.
struct TimeAgentConfig {
  double c = 1.0;
  double p_min = 0.0;
  double p_max = 1.0;
  double k = 0.0;
  OfferMode mode = OfferMode::kPlanar;
  double noise_sigma = 0.05;  // preference-mode offer noise
};

// Normalized decision utility at time t of horizon T. t in [0, T].
double time_decision_utility(const TimeAgentConfig& cfg, double t, double T);

// Uniform sample from the plane w.x / sum(w) = u_d intersected with [0,1]^m,
// by rejection sampling (m-1 coordinates uniform, last solved). After
// max_tries failures, falls back to the noise-free preference concession
// offer. u_d in [0, 1].
Offer planar_offer(std::span<const double> weights, double u_d, Rng& rng,
                   int max_tries = 10000);

// Concede whole issues in increasing weight order (ties by index) starting
// from the full pie until the normalized kept utility hits u_d, then add
// N(0, sigma^2) noise per component and clamp into [0, 1].
Offer preference_concession_offer(std::span<const double> weights, double u_d,
                                  double sigma, Rng& rng);

// Accepts when the normalized received utility reaches u(t); offers via the
// configured mode at the current round's decision utility.
class TimeAgent : public Agent {
 public:
  explicit TimeAgent(TimeAgentConfig cfg) : cfg_(cfg) {}
  Offer propose(int round, Rng& rng) override;
  bool decide(const Offer& incoming, int round, Rng& rng) override;
  const TimeAgentConfig& config() const { return cfg_; }

 private:
  TimeAgentConfig cfg_;
};

Offer hardliner_offer(int issues);
Offer random_walker_offer(int issues, Rng& rng);

// Always demands the full pie; accepts only full utility.
class Hardliner : public Agent {
 public:
  Offer propose(int round, Rng& rng) override;
  bool decide(const Offer& incoming, int round, Rng& rng) override;
};

// I.i.d. uniform offers; accepts when the normalized received utility beats
// a fresh uniform draw.
class RandomWalker : public Agent {
 public:
  Offer propose(int round, Rng& rng) override;
  bool decide(const Offer& incoming, int round, Rng& rng) override;
};

}  // namespace negotiation

#endif  // NEGOTIATION_TIME_AGENTS_HPP_
