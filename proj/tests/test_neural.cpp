#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "negotiation/neural/adam.hpp"
#include "negotiation/neural/checkpoint.hpp"
#include "negotiation/neural/distributions.hpp"
#include "negotiation/neural/layers.hpp"
#include "negotiation/neural/nets.hpp"
#include "negotiation/rng.hpp"

using namespace negotiation;
using namespace negotiation::neural;

TEST_CASE("activations and a hand-built affine layer") {
  CHECK(activate(Activation::kRelu6, 7.0) == 6.0);
  CHECK(activate(Activation::kRelu6, -1.0) == 0.0);
  CHECK(activate(Activation::kRelu6, 3.0) == 3.0);
  CHECK(activate(Activation::kRelu, -2.0) == 0.0);
  CHECK(activate(Activation::kSigmoid, 0.0) == doctest::Approx(0.5));
  CHECK(activate_grad(Activation::kRelu6, 3.0) == 1.0);
  CHECK(activate_grad(Activation::kRelu6, 7.0) == 0.0);
  CHECK(activate_grad(Activation::kNone, -9.0) == 1.0);

  LayerStack net({{2, 2, Activation::kNone}});
  net.params() = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};  // W rows then b
  const std::vector<double> x{1.0, 1.0};
  const auto y = net.forward(x);
  REQUIRE(y.size() == 2);
  CHECK(y[0] == doctest::Approx(8.0));
  CHECK(y[1] == doctest::Approx(13.0));

  LayerStack::Cache cache;
  (void)net.forward(x, &cache);
  std::vector<double> grad(net.param_count(), 0.0);
  const std::vector<double> d_out{1.0, 0.0};
  const auto d_in = net.backward(cache, d_out, grad);
  CHECK(grad[0] == doctest::Approx(1.0));  // dL/dW00 = x0
  CHECK(grad[1] == doctest::Approx(1.0));
  CHECK(grad[2] == doctest::Approx(0.0));
  CHECK(grad[4] == doctest::Approx(1.0));  // dL/db0
  CHECK(grad[5] == doctest::Approx(0.0));
  REQUIRE(d_in.size() == 2);
  CHECK(d_in[0] == doctest::Approx(1.0));  // W^T d = (1, 3)
  CHECK(d_in[1] == doctest::Approx(3.0));
}

TEST_CASE("he-uniform init bounds weights and zeroes biases") {
  LayerStack net({{4, 8, Activation::kRelu6}});
  Rng rng(7);
  net.init_he_uniform(rng);
  const double bound = std::sqrt(6.0 / 4.0);
  const auto& p = net.params();
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(p[i] <= bound);
    CHECK(p[i] >= -bound);
  }
  for (std::size_t i = 32; i < 40; ++i) CHECK(p[i] == 0.0);
}

TEST_CASE("layer stack gradients match central finite differences") {
  Rng rng(42);
  const Activation acts[] = {Activation::kNone, Activation::kRelu,
                             Activation::kRelu6, Activation::kSigmoid};
  for (int trial = 0; trial < 30; ++trial) {
    const int depth = 1 + static_cast<int>(rng.uniform_index(3));
    std::vector<LayerSpec> specs;
    std::size_t in = 1 + rng.uniform_index(5);
    for (int l = 0; l < depth; ++l) {
      const std::size_t out = 1 + rng.uniform_index(5);
      specs.push_back({in, out, acts[rng.uniform_index(4)]});
      in = out;
    }
    LayerStack net(specs);
    net.init_he_uniform(rng);

    std::vector<double> x(net.input_dim());
    for (auto& v : x) v = rng.uniform_in(-2.0, 2.0);
    std::vector<double> w(net.output_dim());
    for (auto& v : w) v = rng.uniform_in(-1.0, 1.0);
    auto loss = [&]() {
      const auto y = net.forward(x);
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += w[i] * y[i];
      return s;
    };

    LayerStack::Cache cache;
    (void)net.forward(x, &cache);
    std::vector<double> grad(net.param_count(), 0.0);
    const auto d_in = net.backward(cache, w, grad);

    const double h = 1e-6;
    for (std::size_t i = 0; i < net.param_count(); ++i) {
      const double saved = net.params()[i];
      net.params()[i] = saved + h;
      const double up = loss();
      net.params()[i] = saved - h;
      const double dn = loss();
      net.params()[i] = saved;
      const double fd = (up - dn) / (2.0 * h);
      CHECK(std::abs(fd - grad[i]) <=
            1e-6 + 1e-4 * std::max(std::abs(fd), std::abs(grad[i])));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double saved = x[i];
      x[i] = saved + h;
      const double up = loss();
      x[i] = saved - h;
      const double dn = loss();
      x[i] = saved;
      const double fd = (up - dn) / (2.0 * h);
      CHECK(std::abs(fd - d_in[i]) <=
            1e-6 + 1e-4 * std::max(std::abs(fd), std::abs(d_in[i])));
    }
  }
}

TEST_CASE("softmax basics") {
  const auto sym = softmax(std::vector<double>{2.0, 2.0, 2.0});
  for (double p : sym) CHECK(p == doctest::Approx(1.0 / 3.0));

  const auto two = softmax(std::vector<double>{0.0, std::log(3.0)});
  CHECK(two[0] == doctest::Approx(0.25));
  CHECK(two[1] == doctest::Approx(0.75));

  const auto a = softmax(std::vector<double>{1.0, -2.0, 0.5});
  const auto b = softmax(std::vector<double>{101.0, 98.0, 100.5});
  for (int i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]));
  CHECK(a[0] + a[1] + a[2] == doctest::Approx(1.0));
}

namespace {

template <typename F>
void check_logprob_grads(F f, double x, double p1, double p2) {
  const LogProb lp = f(x, p1, p2);
  const double h = 1e-6;
  const double fd1 = (f(x, p1 + h, p2).value - f(x, p1 - h, p2).value) / (2 * h);
  const double fd2 = (f(x, p1, p2 + h).value - f(x, p1, p2 - h).value) / (2 * h);
  CHECK(lp.d_p1 == doctest::Approx(fd1).epsilon(1e-5));
  CHECK(lp.d_p2 == doctest::Approx(fd2).epsilon(1e-5));
}

}  // namespace

TEST_CASE("log probability values and parameter gradients") {
  // Normal density at the mean: 1 / (sigma sqrt(2 pi)).
  const LogProb n = normal_log_prob(0.3, 0.3, 0.5);
  CHECK(n.value ==
        doctest::Approx(-std::log(0.5 * std::sqrt(2.0 * std::numbers::pi))));

  // Cauchy density at the median with gamma = 1/pi is exactly 1.
  const LogProb c = cauchy_log_prob(0.7, 0.7, 1.0 / std::numbers::pi);
  CHECK(c.value == doctest::Approx(0.0));

  // Beta(1, 1) is uniform: log pdf 0 everywhere on (0, 1).
  CHECK(beta_log_prob(0.42, 1.0, 1.0).value == doctest::Approx(0.0));

  Rng rng(11);
  for (int i = 0; i < 25; ++i) {
    const double x = rng.uniform_in(0.05, 0.95);
    check_logprob_grads(normal_log_prob, x, rng.uniform_in(-1.0, 1.0),
                        rng.uniform_in(0.1, 2.0));
    check_logprob_grads(cauchy_log_prob, x, rng.uniform_in(-1.0, 1.0),
                        rng.uniform_in(0.1, 2.0));
    check_logprob_grads(beta_log_prob, x, rng.uniform_in(0.5, 4.0),
                        rng.uniform_in(0.5, 4.0));
  }
}

TEST_CASE("samplers hit their distribution moments") {
  Rng rng(99);
  const int n = 20000;

  double nsum = 0.0;
  for (int i = 0; i < n; ++i) nsum += normal_sample(rng, 0.3, 0.5);
  CHECK(nsum / n == doctest::Approx(0.3).epsilon(0.05));

  std::vector<double> cs(n);
  for (auto& v : cs) v = cauchy_sample(rng, -0.4, 0.3);
  std::nth_element(cs.begin(), cs.begin() + n / 2, cs.end());
  CHECK(cs[n / 2] == doctest::Approx(-0.4).epsilon(0.1));

  double bsum = 0.0, bsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = beta_sample(rng, 2.0, 2.0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    bsum += v;
    bsq += v * v;
  }
  const double bmean = bsum / n;
  CHECK(bmean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(bsq / n - bmean * bmean == doctest::Approx(0.05).epsilon(0.1));

  double gsum = 0.0;
  for (int i = 0; i < n; ++i) gsum += gamma_sample(rng, 3.0);
  CHECK(gsum / n == doctest::Approx(3.0).epsilon(0.05));

  const std::vector<double> probs{0.2, 0.5, 0.3};
  std::array<int, 3> counts{};
  for (int i = 0; i < 50000; ++i) ++counts[categorical_sample(rng, probs)];
  CHECK(counts[0] / 50000.0 == doctest::Approx(0.2).epsilon(0.05));
  CHECK(counts[1] / 50000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("densities integrate to one") {
  auto simpson = [](auto pdf, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = pdf(lo) + pdf(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * h);
    return s * h / 3.0;
  };
  CHECK(simpson([](double x) { return std::exp(normal_log_prob(x, 0.2, 0.7).value); },
                -7.0, 7.0, 2000) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(simpson([](double x) { return std::exp(beta_log_prob(x, 2.5, 1.7).value); },
                1e-9, 1.0 - 1e-9, 2000) == doctest::Approx(1.0).epsilon(1e-3));
  // Cauchy tails are heavy; integrate the CDF range analytically covered.
  const double mass =
      simpson([](double x) { return std::exp(cauchy_log_prob(x, 0.0, 0.5).value); },
              -500.0, 500.0, 200000);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("beta moments") {
  const BetaMoments m = beta_moments(2.0, 2.0);
  CHECK(m.mean == doctest::Approx(0.5));
  CHECK(m.variance == doctest::Approx(0.05));
  const BetaMoments n = beta_moments(3.0, 1.0);
  CHECK(n.mean == doctest::Approx(0.75));
  CHECK(n.variance == doctest::Approx(3.0 / (16.0 * 5.0)));
}

TEST_CASE("entropy bonus formulas and gradients") {
  const double l2p = std::log(2.0 * std::numbers::pi);
  CHECK(entropy_term(1.0, EntropyFormula::kPaper) == doctest::Approx(0.5));
  CHECK(entropy_term(std::numbers::e, EntropyFormula::kPaper) ==
        doctest::Approx(0.5 + l2p));
  CHECK(entropy_term(1.0, EntropyFormula::kStandard) ==
        doctest::Approx(0.5 * (l2p + 1.0)));

  for (double sigma : {0.2, 0.8, 1.5, 3.0}) {
    for (auto formula : {EntropyFormula::kPaper, EntropyFormula::kStandard}) {
      const double h = 1e-6;
      const double fd = (entropy_term(sigma + h, formula) -
                         entropy_term(sigma - h, formula)) /
                        (2.0 * h);
      CHECK(entropy_term_grad(sigma, formula) ==
            doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("digamma special values and recurrence") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-10));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - 0.5772156649015329).epsilon(1e-10));
  CHECK(digamma(0.5) ==
        doctest::Approx(-0.5772156649015329 - 2.0 * std::log(2.0)).epsilon(1e-10));
  for (double x : {0.3, 1.7, 5.5, 11.0})
    CHECK(digamma(x + 1.0) - digamma(x) == doctest::Approx(1.0 / x).epsilon(1e-10));
}

TEST_CASE("adam steps") {
  LayerStack net({{1, 1, Activation::kNone}});
  net.params() = {0.0, 0.0};
  AdamState st = AdamState::create({&net}, {.lr = 0.1});

  // Zero gradient: parameters must not move.
  adam_step(st, {&net}, {{0.0, 0.0}});
  CHECK(net.params()[0] == 0.0);
  CHECK(net.params()[1] == 0.0);

  // One unit-gradient step moves by lr / (1 + eps) after bias correction.
  AdamState st2 = AdamState::create({&net}, {.lr = 0.1});
  net.params() = {0.0, 0.0};
  adam_step(st2, {&net}, {{1.0, 0.0}});
  CHECK(net.params()[0] == doctest::Approx(-0.1 / (1.0 + 1e-8)).epsilon(1e-12));
  CHECK(net.params()[1] == 0.0);
  CHECK(st2.step == 1);

  // Minimizing x^2 from x = 1 converges well inside 5000 steps at lr 1e-2.
  LayerStack q({{1, 1, Activation::kNone}});
  q.params() = {1.0, 0.0};
  AdamState st3 = AdamState::create({&q}, {.lr = 1e-2});
  for (int i = 0; i < 5000; ++i)
    adam_step(st3, {&q}, {{2.0 * q.params()[0], 0.0}});
  CHECK(std::abs(q.params()[0]) < 1e-3);

  CHECK_THROWS(adam_step(st3, {&q}, {{1.0}}));  // grad size mismatch
}

TEST_CASE("accept net forward shapes and ranges") {
  Rng rng(5);
  ActorCriticNet net = build_accept_net({.input_dim = 4, .hidden = 16}, rng);
  const std::vector<double> in{0.2, 0.5, 0.9, 0.35};
  const auto f = net.forward(in);
  REQUIRE(f.logits.size() == 2);
  CHECK(std::isfinite(f.logits[0]));
  CHECK(std::isfinite(f.logits[1]));
  CHECK(std::isfinite(f.value));
  REQUIRE(f.hidden.size() == 16);
  for (double h : f.hidden) {
    CHECK(h >= 0.0);
    CHECK(h <= 6.0);
  }
  const auto probs = softmax(f.logits);
  CHECK(probs[0] + probs[1] == doctest::Approx(1.0));
}

TEST_CASE("offer net heads stay in their parameter domains") {
  Rng rng(6);
  for (HeadKind head : {HeadKind::kNormal, HeadKind::kCauchy, HeadKind::kBeta}) {
    OfferNetConfig cfg;
    cfg.head = head;
    cfg.trunk_width = 8;
    cfg.value_width = 8;
    cfg.value_layers = 2;
    cfg.head_width = 8;
    OfferNet net = build_offer_net(cfg, rng);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> in(4);
      for (auto& v : in) v = rng.uniform();
      const auto f = net.forward(in);
      REQUIRE(f.p1.size() == 3);
      REQUIRE(f.p2.size() == 3);
      for (int k = 0; k < 3; ++k) {
        if (head == HeadKind::kBeta) {
          CHECK(f.p1[k] >= cfg.beta_offset);
          CHECK(f.p2[k] >= cfg.beta_offset);
        } else {
          CHECK(f.p1[k] >= 0.0);
          CHECK(f.p1[k] <= 1.0);
          CHECK(f.p2[k] >= cfg.scale_floor);
          CHECK(f.p2[k] <= 1.0 + cfg.scale_floor);
        }
      }
      CHECK(std::isfinite(f.value));
    }
  }
}

TEST_CASE("actor-critic backward matches finite differences") {
  Rng rng(13);
  ActorCriticNet net = build_accept_net({.input_dim = 4, .hidden = 6}, rng);
  const std::vector<double> in{0.1, 0.8, 0.4, 0.55};
  const std::vector<double> dl{0.7, -0.3};
  const double dv = 0.9;

  auto loss = [&]() {
    const auto f = net.forward(in);
    return dl[0] * f.logits[0] + dl[1] * f.logits[1] + dv * f.value;
  };
  const auto f = net.forward(in);
  auto grads = make_grad_buffer(net.stacks());
  net.backward(f, dl, dv, grads);

  const auto stacks = net.stacks();
  const double h = 1e-6;
  for (std::size_t s = 0; s < stacks.size(); ++s) {
    for (std::size_t i = 0; i < stacks[s]->param_count(); ++i) {
      double& p = stacks[s]->params()[i];
      const double saved = p;
      p = saved + h;
      const double up = loss();
      p = saved - h;
      const double dn = loss();
      p = saved;
      const double fd = (up - dn) / (2.0 * h);
      CHECK(std::abs(fd - grads[s][i]) <=
            1e-6 + 1e-4 * std::max(std::abs(fd), std::abs(grads[s][i])));
    }
  }
}

TEST_CASE("offer net backward matches finite differences") {
  Rng rng(14);
  for (HeadKind head : {HeadKind::kNormal, HeadKind::kBeta}) {
    OfferNetConfig cfg;
    cfg.head = head;
    cfg.trunk_width = 5;
    cfg.value_width = 5;
    cfg.value_layers = 2;
    cfg.head_width = 4;
    OfferNet net = build_offer_net(cfg, rng);

    const std::vector<double> in{0.3, 0.6, 0.2, 0.15};
    std::vector<double> d1(3), d2(3);
    for (auto& v : d1) v = rng.uniform_in(-1.0, 1.0);
    for (auto& v : d2) v = rng.uniform_in(-1.0, 1.0);
    const double dv = -0.4;

    auto loss = [&]() {
      const auto f = net.forward(in);
      double s = dv * f.value;
      for (int k = 0; k < 3; ++k) s += d1[k] * f.p1[k] + d2[k] * f.p2[k];
      return s;
    };
    const auto f = net.forward(in);
    auto grads = make_grad_buffer(net.stacks());
    net.backward(f, d1, d2, dv, grads);

    const auto stacks = net.stacks();
    const double h = 1e-6;
    for (std::size_t s = 0; s < stacks.size(); ++s) {
      for (std::size_t i = 0; i < stacks[s]->param_count(); ++i) {
        double& p = stacks[s]->params()[i];
        const double saved = p;
        p = saved + h;
        const double up = loss();
        p = saved - h;
        const double dn = loss();
        p = saved;
        const double fd = (up - dn) / (2.0 * h);
        CHECK(std::abs(fd - grads[s][i]) <=
              1e-6 + 1e-4 * std::max(std::abs(fd), std::abs(grads[s][i])));
      }
    }
  }
}

TEST_CASE("checkpoints round-trip byte-exactly") {
  Rng rng(77);
  Checkpoint ckpt;
  ckpt.master_seed = 123456789ULL;
  ckpt.rng_state = rng.state();
  ckpt.epochs_trained = 42;

  TrainedPolicy accept;
  accept.kind = PolicyKind::kAccept;
  accept.binary = build_accept_net({.input_dim = 4, .hidden = 8}, rng);
  accept.adam = AdamState::create(accept.binary->stacks(), {.lr = 3e-4});
  accept.adam.step = 9;
  accept.adam.m[0][0] = 0.125;
  accept.adam.v[0][0] = 0.5;
  ckpt.policies.push_back(std::move(accept));

  TrainedPolicy offer;
  offer.kind = PolicyKind::kOffer;
  OfferNetConfig ocfg;
  ocfg.trunk_width = 4;
  ocfg.value_width = 4;
  ocfg.value_layers = 2;
  ocfg.head_width = 3;
  ocfg.head = HeadKind::kCauchy;
  offer.offer = build_offer_net(ocfg, rng);
  offer.adam = AdamState::create(offer.offer->stacks(), {.lr = 1e-4});
  ckpt.policies.push_back(std::move(offer));

  const auto bytes = serialize_checkpoint(ckpt);
  const Checkpoint back = parse_checkpoint(bytes);
  CHECK(back.master_seed == ckpt.master_seed);
  CHECK(back.rng_state == ckpt.rng_state);
  CHECK(back.epochs_trained == 42);
  REQUIRE(back.policies.size() == 2);
  CHECK(back.policies[0].kind == PolicyKind::kAccept);
  CHECK(back.policies[0].adam.step == 9);
  CHECK(back.policies[0].adam.m[0][0] == 0.125);
  CHECK(back.policies[1].offer->cfg.head == HeadKind::kCauchy);
  CHECK(serialize_checkpoint(back) == bytes);

  const auto dir = std::filesystem::temp_directory_path() / "neg_ckpt_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "model.ckpt").string();
  save_checkpoint(path, ckpt);
  const Checkpoint loaded = load_checkpoint(path);
  CHECK(serialize_checkpoint(loaded) == bytes);
  std::filesystem::remove_all(dir);

  auto corrupt = bytes;
  corrupt[0] ^= 0xFF;
  CHECK_THROWS_AS((void)parse_checkpoint(corrupt), std::runtime_error);
  auto truncated = bytes;
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS((void)parse_checkpoint(truncated), std::runtime_error);
}
