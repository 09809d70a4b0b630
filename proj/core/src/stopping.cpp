#include "negotiation/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace negotiation {

namespace {

void check_cdt(double c, double d, double T) {
  if (!(c > 0.0)) throw std::invalid_argument("stopping: c must be > 0");
  if (!(d > 0.0)) throw std::invalid_argument("stopping: d must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("stopping: T must be > 0");
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double own_utility(double c, double d, double T, double t) {
  check_cdt(c, d, T);
  if (t < 0.0) throw std::invalid_argument("stopping: t must be >= 0");
  return std::pow(t / T, 1.0 / c) * std::pow(d, t);
}

double own_marginal_utility(double c, double d, double T, double t) {
  check_cdt(c, d, T);
  if (!(t > 0.0)) throw std::invalid_argument("stopping: t must be > 0");
  return std::pow(t, 1.0 / c) * std::pow(d, t) / std::pow(T, 1.0 / c) *
         (1.0 / (c * t) + std::log(d));
}

double opponent_marginal_utility(double c, double T, double p_reserve,
                                 double t) {
  if (!(c > 0.0)) throw std::invalid_argument("stopping: c must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("stopping: T must be > 0");
  if (t == 0.0 && c > 1.0)
    throw std::domain_error("opponent_marginal_utility: singular at t = 0 for c > 1");
  if (t < 0.0) throw std::invalid_argument("stopping: t must be >= 0");
  return -(1.0 - p_reserve) / (c * std::pow(T, 1.0 / c)) *
         std::pow(t, (1.0 - c) / c);
}

double optimal_stopping_time(double c, double d, double T) {
  check_cdt(c, d, T);
  if (d >= 1.0) return T;
  const double stationary = -1.0 / (c * std::log(d));
  return stationary > T ? T : stationary;
}

double second_time_derivative(double c, double d, double T, double t) {
  check_cdt(c, d, T);
  if (!(t > 0.0)) throw std::invalid_argument("stopping: t must be > 0");
  const double ln = std::log(d);
  return std::pow(d, t) / std::pow(T, 1.0 / c) *
         (ln * ln * std::pow(t, 1.0 / c) +
          (2.0 * ln / c) * std::pow(t, (1.0 - c) / c) +
          ((1.0 - c) / (c * c)) * std::pow(t, (1.0 - 2.0 * c) / c));
}

double nth_time_derivative(double c, double d, double T, int n, double t) {
  check_cdt(c, d, T);
  if (n < 0) throw std::invalid_argument("stopping: n must be >= 0");
  if (!(t > 0.0)) throw std::invalid_argument("stopping: t must be > 0");
  const double ln = std::log(d);
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    double prod = 1.0;
    for (int j = 1; j <= i; ++j) prod *= 1.0 - (j - 1) * c;
    double term = binomial(n, i) * prod / std::pow(c, i) *
                  std::pow(t, (1.0 - i * c) / c);
    // d = 1 contributes only via the i = n term ((ln d)^0 = 1).
    if (i < n) {
      if (ln == 0.0) continue;
      term *= std::pow(ln, n - i);
    }
    sum += term;
  }
  return std::pow(d, t) / std::pow(T, 1.0 / c) * sum;
}

std::vector<double> cumulative_accept_probabilities(
    std::span<const double> p_accept) {
  std::vector<double> out(p_accept.size());
  double survive = 1.0;
  for (std::size_t i = 0; i < p_accept.size(); ++i) {
    const double p = p_accept[i];
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("cumulative_accept_probabilities: p outside [0, 1]");
    out[i] = p * survive;
    survive *= 1.0 - p;
  }
  return out;
}

double concession_from_decision_utility(double t, double T, double u_d) {
  if (!(t > 0.0 && T > 0.0 && t <= T))
    throw std::invalid_argument("concession conversion: need 0 < t <= T");
  if (!(u_d > 0.0 && u_d < 1.0))
    throw std::invalid_argument("concession conversion: need u_d in (0, 1)");
  return std::log(t / T) / std::log(u_d);
}

}  // namespace negotiation
