#ifndef NEGOTIATION_NEURAL_LAYERS_HPP_
#define NEGOTIATION_NEURAL_LAYERS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "negotiation/rng.hpp"

namespace negotiation::neural {

enum class Activation { kNone, kRelu, kRelu6, kSigmoid };

struct LayerSpec {
  std::size_t in = 0;
  std::size_t out = 0;
  Activation act = Activation::kNone;
};

// A chain of affine layers (y = W x + b) with elementwise activations.
// Parameters live in one flat buffer, per layer W row-major then b, so the
// optimizer, checkpoints and finite-difference checks all see the same
// layout.
class LayerStack {
 public:
  LayerStack() = default;
  explicit LayerStack(std::vector<LayerSpec> specs);

  // He-style uniform init: W ~ U(-sqrt(6/fan_in), sqrt(6/fan_in)), b = 0.
  void init_he_uniform(Rng& rng);

  struct Cache {
    std::vector<std::vector<double>> inputs;   // input to each layer
    std::vector<std::vector<double>> preacts;  // W x + b per layer
  };

  std::vector<double> forward(std::span<const double> input,
                              Cache* cache = nullptr) const;

  // Accumulates dL/dparams into grad (same layout as params()) and returns
  // dL/dinput. cache must come from a forward() on the current parameters.
  std::vector<double> backward(const Cache& cache,
                               std::span<const double> d_output,
                               std::span<double> grad) const;

  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t input_dim() const { return specs_.front().in; }
  std::size_t output_dim() const { return specs_.back().out; }

 private:
  std::vector<LayerSpec> specs_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;  // start of each layer's block
};

double activate(Activation a, double z);
// Derivative as a function of the preactivation z (kink convention: 0).
double activate_grad(Activation a, double z);

}  // namespace negotiation::neural

#endif  // NEGOTIATION_NEURAL_LAYERS_HPP_
