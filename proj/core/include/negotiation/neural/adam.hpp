#ifndef NEGOTIATION_NEURAL_ADAM_HPP_
#define NEGOTIATION_NEURAL_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "negotiation/neural/layers.hpp"

namespace negotiation::neural {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment buffers parallel to a net's stacks.
struct AdamState {
  AdamConfig cfg;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  static AdamState create(const std::vector<LayerStack*>& stacks,
                          AdamConfig cfg) {
    AdamState s;
    s.cfg = cfg;
    for (const LayerStack* st : stacks) {
      s.m.emplace_back(st->param_count(), 0.0);
      s.v.emplace_back(st->param_count(), 0.0);
    }
    return s;
  }
};

// One bias-corrected Adam descent step on the given gradients.
inline void adam_step(AdamState& state, std::vector<LayerStack*> stacks,
                      const std::vector<std::vector<double>>& grads) {
  if (stacks.size() != state.m.size() || grads.size() != state.m.size())
    throw std::invalid_argument("adam_step: buffer shape mismatch");
  ++state.step;
  const double bc1 = 1.0 - std::pow(state.cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.cfg.beta2, static_cast<double>(state.step));
  for (std::size_t s = 0; s < stacks.size(); ++s) {
    auto& params = stacks[s]->params();
    auto& m = state.m[s];
    auto& v = state.v[s];
    const auto& g = grads[s];
    if (params.size() != g.size())
      throw std::invalid_argument("adam_step: grad size mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = state.cfg.beta1 * m[i] + (1.0 - state.cfg.beta1) * g[i];
      v[i] = state.cfg.beta2 * v[i] + (1.0 - state.cfg.beta2) * g[i] * g[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      params[i] -= state.cfg.lr * mh / (std::sqrt(vh) + state.cfg.eps);
    }
  }
}

}  // namespace negotiation::neural

#endif  // NEGOTIATION_NEURAL_ADAM_HPP_
