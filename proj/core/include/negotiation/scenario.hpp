#ifndef NEGOTIATION_SCENARIO_HPP_
#define NEGOTIATION_SCENARIO_HPP_

#include <span>
#include <vector>

namespace negotiation {

enum class Side { kA, kB };

inline Side other(Side s) { return s == Side::kA ? Side::kB : Side::kA; }

// An offer is the proposer's kept portion per issue; the receiver implicitly
// gets 1 - share on each issue.
struct Offer {
  std::vector<double> shares;

  Offer() = default;
  explicit Offer(std::vector<double> s) : shares(std::move(s)) {}

  std::size_t size() const { return shares.size(); }
  double& operator[](std::size_t i) { return shares[i]; }
  double operator[](std::size_t i) const { return shares[i]; }
  bool operator==(const Offer&) const = default;
};

Offer received_from(const Offer& proposed);

struct Scenario {
  std::vector<double> weights_a{1.0, 2.0, 3.0};
  std::vector<double> weights_b{3.0, 2.0, 1.0};
  int deadline = 20;
  double discount = 1.0;         // delta in (0,1]; >1 only in centipede mode
  double reserve = 0.0;
  double conflict_penalty = 1.0; // K
  bool centipede = false;        // permits a growth factor (discount > 1)

  int issues() const { return static_cast<int>(weights_a.size()); }
  const std::vector<double>& weights(Side s) const {
    return s == Side::kA ? weights_a : weights_b;
  }
  double weight_sum(Side s) const;

  // Throws std::invalid_argument on malformed scenarios.
  void validate() const;

  static Scenario default_multivariate();
  static Scenario univariate(double discount, bool centipede = false);
};

// Discounted additive utility: delta^(round-1) * sum_i w_i * share_i,
// and 0 for any round past the deadline.
double utility(std::span<const double> shares, std::span<const double> weights,
               double delta, int round, int deadline);

// utility() divided by the weight sum; in [0, 1] for round <= deadline.
double normalized_utility(std::span<const double> shares,
                          std::span<const double> weights, double delta,
                          int round, int deadline);

}  // namespace negotiation

#endif  // NEGOTIATION_SCENARIO_HPP_
