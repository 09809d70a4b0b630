#include "negotiation/training/updates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "negotiation/neural/distributions.hpp"

namespace negotiation::training {

namespace {

using neural::EntropyFormula;
using neural::HeadKind;
using neural::LogProb;

// d(variance)/d(alpha) and d(variance)/d(beta) of a Beta(alpha, beta):
// Var = a*b / (s^2 (s+1)) with s = a + b.
void beta_variance_grad(double a, double b, double& d_a, double& d_b) {
  const double s = a + b;
  const double denom = s * s * (s + 1.0);
  const double shared = a * b * (3.0 * s + 2.0) / (denom * s * (s + 1.0));
  d_a = b / denom - shared;
  d_b = a / denom - shared;
}

}  // namespace

double UpdateStats::mean_critic_loss() const {
  return records > 0 ? critic_loss / records : 0.0;
}

double UpdateStats::mean_actor_loss() const {
  return records > 0 ? actor_loss / records : 0.0;
}

std::vector<double> UpdateStats::mean_scale() const {
  std::vector<double> out(scale_sum.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = records > 0 ? scale_sum[i] / records : 0.0;
  return out;
}

void accumulate_binary_record(const neural::ActorCriticNet& net,
                              const BinaryRecord& record, double reward,
                              std::vector<std::vector<double>>& grads,
                              UpdateStats& stats) {
  const auto fwd = net.forward(record.input);
  const std::vector<double> probs = neural::softmax(fwd.logits);
  if (record.action < 0 || record.action >= static_cast<int>(probs.size()))
    throw std::invalid_argument("accumulate_binary_record: bad action");

  const double td = reward - fwd.value;
  const double d_value = -2.0 * td;
  std::vector<double> d_logits(probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) {
    const double indicator = static_cast<int>(j) == record.action ? 1.0 : 0.0;
    d_logits[j] = td * (probs[j] - indicator);
  }
  net.backward(fwd, d_logits, d_value, grads);

  stats.critic_loss += td * td;
  stats.actor_loss += -std::log(probs[static_cast<std::size_t>(record.action)]) * td;
  ++stats.records;
}

double head_entropy_scale(HeadKind head, double p1, double p2) {
  if (head == HeadKind::kBeta)
    return std::sqrt(neural::beta_moments(p1, p2).variance);
  return p2;
}

void accumulate_offer_record(const neural::OfferNet& net,
                             const OfferRecord& record, double reward,
                             std::vector<std::vector<double>>& grads,
                             UpdateStats& stats) {
  const int m = net.cfg.issues;
  if (static_cast<int>(record.actions.size()) != m)
    throw std::invalid_argument("accumulate_offer_record: action arity");

  const auto fwd = net.forward(record.input);
  const double td = reward - fwd.value;
  const double d_value = -2.0 * td;

  if (stats.scale_sum.empty()) stats.scale_sum.assign(m, 0.0);
  std::vector<double> d_p1(m, 0.0), d_p2(m, 0.0);
  double actor = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = record.actions[i];
    const double p1 = fwd.p1[i];
    const double p2 = fwd.p2[i];
    LogProb lp;
    double entropy = 0.0;
    switch (net.cfg.head) {
      case HeadKind::kNormal:
      case HeadKind::kCauchy: {
        lp = net.cfg.head == HeadKind::kNormal
                 ? neural::normal_log_prob(x, p1, p2)
                 : neural::cauchy_log_prob(x, p1, p2);
        entropy = neural::entropy_term(p2, net.cfg.entropy);
        d_p1[i] = -td * lp.d_p1;
        d_p2[i] = -td * (lp.d_p2 + neural::entropy_term_grad(p2, net.cfg.entropy));
        stats.scale_sum[i] += p2;
        ++stats.scale_evals;
        if (p2 <= net.cfg.scale_floor + 1e-6) ++stats.scale_floor_hits;
        break;
      }
      case HeadKind::kBeta: {
        lp = neural::beta_log_prob(x, p1, p2);
        const double sigma = std::sqrt(neural::beta_moments(p1, p2).variance);
        entropy = neural::entropy_term(sigma, net.cfg.entropy);
        const double dh_dsigma = neural::entropy_term_grad(sigma, net.cfg.entropy);
        double dv_da = 0.0, dv_db = 0.0;
        beta_variance_grad(p1, p2, dv_da, dv_db);
        const double dsigma_dv = 0.5 / sigma;
        d_p1[i] = -td * (lp.d_p1 + dh_dsigma * dsigma_dv * dv_da);
        d_p2[i] = -td * (lp.d_p2 + dh_dsigma * dsigma_dv * dv_db);
        stats.scale_sum[i] += sigma;
        break;
      }
      case HeadKind::kCategorical:
        throw std::invalid_argument("accumulate_offer_record: categorical head");
    }
    actor += -(lp.value + entropy) * td;
  }
  net.backward(fwd, d_p1, d_p2, d_value, grads);

  stats.critic_loss += td * td;
  stats.actor_loss += actor;
  ++stats.records;
}

void apply_episode_update(neural::AdamState& adam,
                          std::vector<neural::LayerStack*> stacks,
                          std::vector<std::vector<double>>& grads,
                          int records) {
  if (records <= 0) return;
  const double inv = 1.0 / records;
  for (auto& g : grads)
    for (double& v : g) v *= inv;
  neural::adam_step(adam, std::move(stacks), grads);
}

void zero_grads(std::vector<std::vector<double>>& grads) {
  for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
}

}  // namespace negotiation::training
