#include "negotiation/neural/nets.hpp"

#include <stdexcept>

namespace negotiation::neural {

namespace {

void check_grads(const std::vector<std::vector<double>>& grads,
                 std::size_t expect) {
  if (grads.size() != expect)
    throw std::invalid_argument("backward: grad buffer shape mismatch");
}

}  // namespace

ActorCriticNet::Fwd ActorCriticNet::forward(std::span<const double> input) const {
  Fwd f;
  f.hidden = trunk.forward(input, &f.trunk_cache);
  f.logits = actor.forward(f.hidden, &f.actor_cache);
  f.value = value.forward(f.hidden, &f.value_cache)[0];
  return f;
}

void ActorCriticNet::backward(const Fwd& f, std::span<const double> d_logits,
                              double d_value,
                              std::vector<std::vector<double>>& grads) const {
  check_grads(grads, 3);
  std::vector<double> dh = actor.backward(f.actor_cache, d_logits, grads[1]);
  const double dv[1] = {d_value};
  std::vector<double> dh2 = value.backward(f.value_cache, dv, grads[2]);
  for (std::size_t i = 0; i < dh.size(); ++i) dh[i] += dh2[i];
  trunk.backward(f.trunk_cache, dh, grads[0]);
}

std::vector<LayerStack*> ActorCriticNet::stacks() {
  return {&trunk, &actor, &value};
}

std::vector<const LayerStack*> ActorCriticNet::stacks() const {
  return {&trunk, &actor, &value};
}

ActorCriticNet build_accept_net(const ActorCriticConfig& cfg, Rng& rng) {
  if (cfg.input_dim < 1 || cfg.hidden < 1)
    throw std::invalid_argument("build_accept_net: bad dims");
  const auto in = static_cast<std::size_t>(cfg.input_dim);
  const auto h = static_cast<std::size_t>(cfg.hidden);
  ActorCriticNet net;
  net.cfg = cfg;
  net.trunk = LayerStack({{in, h, Activation::kRelu6},
                          {h, h, Activation::kRelu6}});
  net.actor = LayerStack({{h, 2, Activation::kNone}});
  net.value = LayerStack({{h, 1, Activation::kNone}});
  net.trunk.init_he_uniform(rng);
  net.actor.init_he_uniform(rng);
  net.value.init_he_uniform(rng);
  return net;
}

OfferNet::Fwd OfferNet::forward(std::span<const double> input) const {
  const int m = cfg.issues;
  Fwd f;
  f.loc_caches.resize(m);
  f.scale_caches.resize(m);
  f.p1.resize(m);
  f.p2.resize(m);
  f.hidden = trunk.forward(input, &f.trunk_cache);
  f.value = value.forward(f.hidden, &f.value_cache)[0];
  for (int i = 0; i < m; ++i) {
    const double raw1 = loc_heads[i].forward(f.hidden, &f.loc_caches[i])[0];
    const double raw2 = scale_heads[i].forward(f.hidden, &f.scale_caches[i])[0];
    if (cfg.head == HeadKind::kBeta) {
      f.p1[i] = raw1 + cfg.beta_offset;
      f.p2[i] = raw2 + cfg.beta_offset;
    } else {
      f.p1[i] = raw1;
      f.p2[i] = raw2 + cfg.scale_floor;
    }
  }
  return f;
}

void OfferNet::backward(const Fwd& f, std::span<const double> d_p1,
                        std::span<const double> d_p2, double d_value,
                        std::vector<std::vector<double>>& grads) const {
  const int m = cfg.issues;
  check_grads(grads, 2 + 2 * static_cast<std::size_t>(m));
  const double dv[1] = {d_value};
  std::vector<double> dh = value.backward(f.value_cache, dv, grads[1]);
  for (int i = 0; i < m; ++i) {
    // Additive offsets (scale floor / beta offset) have unit derivative.
    const double dl[1] = {d_p1[i]};
    const double ds[1] = {d_p2[i]};
    std::vector<double> a =
        loc_heads[i].backward(f.loc_caches[i], dl, grads[2 + i]);
    std::vector<double> b =
        scale_heads[i].backward(f.scale_caches[i], ds, grads[2 + m + i]);
    for (std::size_t j = 0; j < dh.size(); ++j) dh[j] += a[j] + b[j];
  }
  trunk.backward(f.trunk_cache, dh, grads[0]);
}

std::vector<LayerStack*> OfferNet::stacks() {
  std::vector<LayerStack*> s{&trunk, &value};
  for (auto& l : loc_heads) s.push_back(&l);
  for (auto& l : scale_heads) s.push_back(&l);
  return s;
}

std::vector<const LayerStack*> OfferNet::stacks() const {
  std::vector<const LayerStack*> s{&trunk, &value};
  for (const auto& l : loc_heads) s.push_back(&l);
  for (const auto& l : scale_heads) s.push_back(&l);
  return s;
}

OfferNet build_offer_net(const OfferNetConfig& cfg, Rng& rng) {
  if (cfg.input_dim < 1 || cfg.issues < 1 || cfg.trunk_width < 1 ||
      cfg.value_width < 1 || cfg.head_width < 1 || cfg.value_layers < 2)
    throw std::invalid_argument("build_offer_net: bad dims");
  if (!(cfg.scale_floor > 0.0))
    throw std::invalid_argument("build_offer_net: scale floor must be > 0");
  if (cfg.head == HeadKind::kBeta && !(cfg.beta_offset > 0.0))
    throw std::invalid_argument("build_offer_net: beta offset must be > 0");
  if (cfg.head == HeadKind::kCategorical)
    throw std::invalid_argument("build_offer_net: categorical heads use build_accept_net");

  const auto in = static_cast<std::size_t>(cfg.input_dim);
  const auto h = static_cast<std::size_t>(cfg.trunk_width);
  const auto vw = static_cast<std::size_t>(cfg.value_width);
  const auto hw = static_cast<std::size_t>(cfg.head_width);
  const Activation last =
      cfg.head == HeadKind::kBeta ? Activation::kRelu : Activation::kSigmoid;

  OfferNet net;
  net.cfg = cfg;
  net.trunk = LayerStack({{in, h, Activation::kRelu6}});

  std::vector<LayerSpec> vspecs;
  vspecs.push_back({h, vw, Activation::kRelu6});
  for (int i = 0; i < cfg.value_layers - 2; ++i)
    vspecs.push_back({vw, vw, Activation::kRelu6});
  vspecs.push_back({vw, 1, Activation::kNone});
  net.value = LayerStack(vspecs);

  for (int i = 0; i < cfg.issues; ++i) {
    net.loc_heads.emplace_back(
        std::vector<LayerSpec>{{h, hw, Activation::kRelu6},
                               {hw, hw, Activation::kRelu6},
                               {hw, 1, last}});
    net.scale_heads.emplace_back(
        std::vector<LayerSpec>{{h, hw, Activation::kRelu6},
                               {hw, 1, last}});
  }
  for (LayerStack* s : net.stacks()) s->init_he_uniform(rng);
  return net;
}

std::vector<std::vector<double>> make_grad_buffer(
    const std::vector<const LayerStack*>& stacks) {
  std::vector<std::vector<double>> g;
  g.reserve(stacks.size());
  for (const LayerStack* s : stacks)
    g.emplace_back(s->param_count(), 0.0);
  return g;
}

std::vector<std::vector<double>> make_grad_buffer(
    const std::vector<LayerStack*>& stacks) {
  std::vector<std::vector<double>> g;
  g.reserve(stacks.size());
  for (const LayerStack* s : stacks)
    g.emplace_back(s->param_count(), 0.0);
  return g;
}

}  // namespace negotiation::neural
