#ifndef NEGOTIATION_NEURAL_DISTRIBUTIONS_HPP_
#define NEGOTIATION_NEURAL_DISTRIBUTIONS_HPP_

#include <span>
#include <vector>

#include "negotiation/rng.hpp"

namespace negotiation::neural {

enum class HeadKind { kCategorical, kNormal, kCauchy, kBeta };

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

// Log-space log prob plus its gradient with respect to the two distribution
// parameters (location/scale, or alpha/beta).
struct LogProb {
  double value = 0.0;
  double d_p1 = 0.0;
  double d_p2 = 0.0;
};

LogProb normal_log_prob(double x, double mu, double sigma);
LogProb cauchy_log_prob(double x, double loc, double gamma);
LogProb beta_log_prob(double x, double alpha, double beta);

double normal_sample(Rng& rng, double mu, double sigma);
double cauchy_sample(Rng& rng, double loc, double gamma);
double gamma_sample(Rng& rng, double shape);  // scale 1
double beta_sample(Rng& rng, double alpha, double beta);
int categorical_sample(Rng& rng, std::span<const double> probs);

struct BetaMoments {
  double mean = 0.0;
  double variance = 0.0;
};
BetaMoments beta_moments(double alpha, double beta);

enum class EntropyFormula { kPaper, kStandard };

// kPaper: 0.5 + log(2 pi) * log(sigma), natural logs (as published).
// kStandard: the differential entropy of a Gaussian,
//            0.5 * log(2 pi e sigma^2).
double entropy_term(double sigma, EntropyFormula formula = EntropyFormula::kPaper);
double entropy_term_grad(double sigma,
                         EntropyFormula formula = EntropyFormula::kPaper);

double digamma(double x);

}  // namespace negotiation::neural

#endif  // NEGOTIATION_NEURAL_DISTRIBUTIONS_HPP_
