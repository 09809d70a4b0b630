#include <benchmark/benchmark.h>

#include "negotiation/engine.hpp"
#include "negotiation/frontier.hpp"
#include "negotiation/neural/nets.hpp"
#include "negotiation/rng.hpp"
#include "negotiation/simplex.hpp"
#include "negotiation/time_agents.hpp"
#include "negotiation/training/loops.hpp"
#include "negotiation/training/rewards.hpp"
#include "negotiation/training/updates.hpp"

namespace {

using namespace negotiation;

void BM_ScriptedPlayout(benchmark::State& state) {
  Scenario sc = Scenario::default_multivariate();
  TimeAgent a(TimeAgentConfig{});
  TimeAgent b(TimeAgentConfig{.c = 2.0});
  Rng rng(7);
  for (auto _ : state) {
    Transcript t = run_negotiation(a, b, sc, rng);
    benchmark::DoNotOptimize(t.end_round);
  }
}
BENCHMARK(BM_ScriptedPlayout);

void BM_AcceptForward(benchmark::State& state) {
  Rng rng(7);
  auto net = neural::build_accept_net({.input_dim = 4, .hidden = 512}, rng);
  std::vector<double> input{0.3, 0.5, 0.7, 0.25};
  for (auto _ : state) {
    auto fwd = net.forward(input);
    benchmark::DoNotOptimize(fwd.logits[0]);
  }
}
BENCHMARK(BM_AcceptForward);

void BM_AcceptTrainEpoch(benchmark::State& state) {
  // One full playout + episode update against the linear opponent.
  Scenario sc = Scenario::default_multivariate();
  Rng init(derive_seed(7, 0));
  auto net = neural::build_accept_net({.input_dim = 4, .hidden = 512}, init);
  auto grads = neural::make_grad_buffer(net.stacks());
  auto adam = neural::AdamState::create(net.stacks(), {.lr = 3e-5});
  TimeAgent opponent(TimeAgentConfig{});
  training::NeuralParty learner;
  learner.accept_net = &net;
  Rng rng(derive_seed(7, 1));
  for (auto _ : state) {
    Transcript t = run_negotiation(opponent, learner, sc, rng);
    auto [ra, rb] = training::assign_rewards(t, sc);
    training::zero_grads(grads);
    training::UpdateStats stats;
    for (const auto& rec : learner.accept_records)
      training::accumulate_binary_record(net, rec, rb, grads, stats);
    training::apply_episode_update(
        adam, net.stacks(), grads,
        static_cast<int>(learner.accept_records.size()));
    benchmark::DoNotOptimize(stats.critic_loss);
  }
}
BENCHMARK(BM_AcceptTrainEpoch);

void BM_OfferUpdate(benchmark::State& state) {
  Rng init(derive_seed(7, 0));
  auto net = neural::build_offer_net({}, init);
  auto grads = neural::make_grad_buffer(net.stacks());
  training::OfferRecord rec{{0.2, 0.4, 0.6, 0.5}, {0.3, 0.6, 0.9}};
  for (auto _ : state) {
    training::zero_grads(grads);
    training::UpdateStats stats;
    training::accumulate_offer_record(net, rec, 1.5, grads, stats);
    benchmark::DoNotOptimize(stats.actor_loss);
  }
}
BENCHMARK(BM_OfferUpdate);

void BM_SimplexNash(benchmark::State& state) {
  Scenario sc = Scenario::default_multivariate();
  for (auto _ : state) {
    auto sol = nash_solution(sc, 0.05);
    benchmark::DoNotOptimize(sol.product);
  }
}
BENCHMARK(BM_SimplexNash);

void BM_FrontierDistance(benchmark::State& state) {
  Scenario sc = Scenario::default_multivariate();
  Frontier f = pareto_frontier(sc);
  OutcomePoint p{2.5, 2.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(frontier_distance(f, p));
  }
}
BENCHMARK(BM_FrontierDistance);

void BM_SimplexMaxUtilityB(benchmark::State& state) {
  // Max u_b over the cube with u_a pinned to 3: maximize -w_b . x under
  // w_a . x = 3 and the box.
  const std::vector<double> objective{-3.0, -2.0, -1.0};
  const std::vector<std::vector<double>> eq_lhs{{1.0, 2.0, 3.0}};
  const std::vector<double> eq_rhs{3.0};
  for (auto _ : state) {
    auto sol = simplex_solve(objective, eq_lhs, eq_rhs);
    benchmark::DoNotOptimize(sol.value);
  }
}
BENCHMARK(BM_SimplexMaxUtilityB);

}  // namespace

BENCHMARK_MAIN();
