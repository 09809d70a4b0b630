#ifndef NEGOTIATION_NEURAL_NETS_HPP_
#define NEGOTIATION_NEURAL_NETS_HPP_

#include <vector>

#include "negotiation/neural/distributions.hpp"
#include "negotiation/neural/layers.hpp"

namespace negotiation::neural {

// Binary-action actor-critic: two affine-ReLU6 layers encode the input into
// a shared hidden state; an affine actor head emits 2 logits and an affine
// value head emits a scalar. Used for accept policies and for the
// categorical two-action mini-game offer head.
struct ActorCriticConfig {
  int input_dim = 4;  // received shares + normalized time
  int hidden = 512;

  bool operator==(const ActorCriticConfig&) const = default;
};

struct ActorCriticNet {
  ActorCriticConfig cfg;
  LayerStack trunk;
  LayerStack actor;
  LayerStack value;

  struct Fwd {
    LayerStack::Cache trunk_cache, actor_cache, value_cache;
    std::vector<double> hidden;
    std::vector<double> logits;
    double value = 0.0;
  };
  Fwd forward(std::span<const double> input) const;
  void backward(const Fwd& f, std::span<const double> d_logits, double d_value,
                std::vector<std::vector<double>>& grads) const;

  std::vector<LayerStack*> stacks();
  std::vector<const LayerStack*> stacks() const;
};

ActorCriticNet build_accept_net(const ActorCriticConfig& cfg, Rng& rng);

// Offer net: a base affine-ReLU6 layer feeds a value stack (value_layers
// affine layers with ReLU6 between them and a linear scalar output) and six
// per-issue parameter heads. Location heads are two affine-ReLU6 layers plus
// a final affine-sigmoid; scale heads are one affine-ReLU6 plus a final
// affine-sigmoid with an additive floor. The beta head replaces the final
// sigmoids with ReLU plus a configurable positive offset, yielding
// (alpha, beta) pairs.
struct OfferNetConfig {
  int input_dim = 4;
  int issues = 3;
  HeadKind head = HeadKind::kNormal;
  int trunk_width = 64;
  int value_width = 64;
  int value_layers = 7;
  int head_width = 32;
  double scale_floor = 1e-3;
  double beta_offset = 1.0;
  EntropyFormula entropy = EntropyFormula::kPaper;

  bool operator==(const OfferNetConfig&) const = default;
};

struct OfferNet {
  OfferNetConfig cfg;
  LayerStack trunk;
  LayerStack value;
  std::vector<LayerStack> loc_heads;
  std::vector<LayerStack> scale_heads;

  struct Fwd {
    LayerStack::Cache trunk_cache, value_cache;
    std::vector<LayerStack::Cache> loc_caches, scale_caches;
    std::vector<double> hidden;
    std::vector<double> p1;  // mu (or alpha) per issue
    std::vector<double> p2;  // sigma/gamma (or beta) per issue
    double value = 0.0;
  };
  Fwd forward(std::span<const double> input) const;
  void backward(const Fwd& f, std::span<const double> d_p1,
                std::span<const double> d_p2, double d_value,
                std::vector<std::vector<double>>& grads) const;

  // Order: trunk, value, loc_heads..., scale_heads...
  std::vector<LayerStack*> stacks();
  std::vector<const LayerStack*> stacks() const;
};

OfferNet build_offer_net(const OfferNetConfig& cfg, Rng& rng);

std::vector<std::vector<double>> make_grad_buffer(
    const std::vector<const LayerStack*>& stacks);
std::vector<std::vector<double>> make_grad_buffer(
    const std::vector<LayerStack*>& stacks);

}  // namespace negotiation::neural

#endif  // NEGOTIATION_NEURAL_NETS_HPP_
