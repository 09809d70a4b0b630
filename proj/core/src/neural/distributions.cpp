#include "negotiation/neural/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace negotiation::neural {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

LogProb normal_log_prob(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_log_prob: sigma must be > 0");
  const double z = (x - mu) / sigma;
  LogProb lp;
  lp.value = -0.5 * z * z - std::log(sigma) - 0.5 * kLog2Pi;
  lp.d_p1 = z / sigma;
  lp.d_p2 = (z * z - 1.0) / sigma;
  return lp;
}

LogProb cauchy_log_prob(double x, double loc, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("cauchy_log_prob: gamma must be > 0");
  const double z = (x - loc) / gamma;
  const double q = 1.0 + z * z;
  LogProb lp;
  lp.value = -std::log(std::numbers::pi * gamma) - std::log(q);
  lp.d_p1 = 2.0 * z / (gamma * q);
  lp.d_p2 = (z * z - 1.0) / (gamma * q);
  return lp;
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("digamma: x must be > 0");
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return acc + std::log(x) - 0.5 * inv -
         inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
}

LogProb beta_log_prob(double x, double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0))
    throw std::invalid_argument("beta_log_prob: parameters must be > 0");
  if (!(x > 0.0 && x < 1.0))
    throw std::invalid_argument("beta_log_prob: x must lie in (0, 1)");
  const double log_b =
      std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  const double psi_ab = digamma(alpha + beta);
  LogProb lp;
  lp.value = (alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) - log_b;
  lp.d_p1 = std::log(x) - digamma(alpha) + psi_ab;
  lp.d_p2 = std::log1p(-x) - digamma(beta) + psi_ab;
  return lp;
}

double normal_sample(Rng& rng, double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal_sample: sigma must be > 0");
  return mu + sigma * rng.normal();
}

double cauchy_sample(Rng& rng, double loc, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("cauchy_sample: gamma must be > 0");
  double u;
  do {
    u = rng.uniform();
  } while (u == 0.5 || u == 0.0);  // avoid the poles of tan
  return loc + gamma * std::tan(std::numbers::pi * (u - 0.5));
}

double gamma_sample(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma_sample: shape must be > 0");
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform_pos(), 1.0 / shape);
    return gamma_sample(rng, shape + 1.0) * boost;
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = rng.normal();
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_sample(Rng& rng, double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0))
    throw std::invalid_argument("beta_sample: parameters must be > 0");
  const double g1 = gamma_sample(rng, alpha);
  const double g2 = gamma_sample(rng, beta);
  const double sum = g1 + g2;
  if (sum <= 0.0) return 0.5;
  return g1 / sum;
}

int categorical_sample(Rng& rng, std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("categorical_sample: empty");
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

BetaMoments beta_moments(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0))
    throw std::invalid_argument("beta_moments: parameters must be > 0");
  const double s = alpha + beta;
  return {alpha / s, alpha * beta / (s * s * (s + 1.0))};
}

double entropy_term(double sigma, EntropyFormula formula) {
  if (!(sigma > 0.0)) throw std::invalid_argument("entropy_term: sigma must be > 0");
  if (formula == EntropyFormula::kPaper)
    return 0.5 + kLog2Pi * std::log(sigma);
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
}

double entropy_term_grad(double sigma, EntropyFormula formula) {
  if (!(sigma > 0.0)) throw std::invalid_argument("entropy_term_grad: sigma must be > 0");
  if (formula == EntropyFormula::kPaper) return kLog2Pi / sigma;
  return 1.0 / sigma;
}

}  // namespace negotiation::neural
