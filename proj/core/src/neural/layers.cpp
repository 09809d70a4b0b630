#include "negotiation/neural/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace negotiation::neural {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::kNone: return z;
    case Activation::kRelu: return z > 0.0 ? z : 0.0;
    case Activation::kRelu6: return z < 0.0 ? 0.0 : (z > 6.0 ? 6.0 : z);
    case Activation::kSigmoid: return 1.0 / (1.0 + std::exp(-z));
  }
  return z;
}

double activate_grad(Activation a, double z) {
  switch (a) {
    case Activation::kNone: return 1.0;
    case Activation::kRelu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::kRelu6: return z > 0.0 && z < 6.0 ? 1.0 : 0.0;
    case Activation::kSigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 - s);
    }
  }
  return 1.0;
}

LayerStack::LayerStack(std::vector<LayerSpec> specs) : specs_(std::move(specs)) {
  if (specs_.empty()) throw std::invalid_argument("LayerStack: no layers");
  std::size_t total = 0;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    if (s.in == 0 || s.out == 0)
      throw std::invalid_argument("LayerStack: zero-sized layer");
    if (i > 0 && s.in != specs_[i - 1].out)
      throw std::invalid_argument("LayerStack: layer dims do not chain");
    offsets_.push_back(total);
    total += s.in * s.out + s.out;
  }
  params_.assign(total, 0.0);
}

void LayerStack::init_he_uniform(Rng& rng) {
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const auto& s = specs_[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(s.in));
    double* w = params_.data() + offsets_[l];
    for (std::size_t i = 0; i < s.in * s.out; ++i)
      w[i] = rng.uniform_in(-bound, bound);
    double* b = w + s.in * s.out;
    for (std::size_t i = 0; i < s.out; ++i) b[i] = 0.0;
  }
}

std::vector<double> LayerStack::forward(std::span<const double> input,
                                        Cache* cache) const {
  if (input.size() != specs_.front().in)
    throw std::invalid_argument("LayerStack::forward: input dim mismatch");
  if (cache) {
    cache->inputs.clear();
    cache->preacts.clear();
  }
  std::vector<double> x(input.begin(), input.end());
  for (std::size_t l = 0; l < specs_.size(); ++l) {
    const auto& s = specs_[l];
    const double* w = params_.data() + offsets_[l];
    const double* b = w + s.in * s.out;
    std::vector<double> z(s.out);
    for (std::size_t o = 0; o < s.out; ++o) {
      const double* row = w + o * s.in;
      double acc = b[o];
      for (std::size_t i = 0; i < s.in; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    if (cache) {
      cache->inputs.push_back(std::move(x));
      cache->preacts.push_back(z);
    }
    std::vector<double> y(s.out);
    for (std::size_t o = 0; o < s.out; ++o) y[o] = activate(s.act, z[o]);
    x = std::move(y);
  }
  return x;
}

std::vector<double> LayerStack::backward(const Cache& cache,
                                         std::span<const double> d_output,
                                         std::span<double> grad) const {
  if (cache.inputs.size() != specs_.size())
    throw std::invalid_argument("LayerStack::backward: stale cache");
  if (grad.size() != params_.size())
    throw std::invalid_argument("LayerStack::backward: grad size mismatch");
  std::vector<double> dy(d_output.begin(), d_output.end());
  for (int l = static_cast<int>(specs_.size()) - 1; l >= 0; --l) {
    const auto& s = specs_[l];
    const double* w = params_.data() + offsets_[l];
    double* gw = grad.data() + offsets_[l];
    double* gb = gw + s.in * s.out;
    const auto& x = cache.inputs[l];
    const auto& z = cache.preacts[l];

    // dz = dy * act'(z)
    std::vector<double> dz(s.out);
    for (std::size_t o = 0; o < s.out; ++o)
      dz[o] = dy[o] * activate_grad(s.act, z[o]);

    std::vector<double> dx(s.in, 0.0);
    for (std::size_t o = 0; o < s.out; ++o) {
      const double d = dz[o];
      if (d == 0.0) continue;
      const double* row = w + o * s.in;
      double* grow = gw + o * s.in;
      for (std::size_t i = 0; i < s.in; ++i) {
        grow[i] += d * x[i];
        dx[i] += d * row[i];
      }
      gb[o] += d;
    }
    dy = std::move(dx);
  }
  return dy;
}

}  // namespace negotiation::neural
