#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "negotiation/engine.hpp"
#include "negotiation/neural/checkpoint.hpp"
#include "negotiation/neural/distributions.hpp"
#include "negotiation/scenario.hpp"
#include "negotiation/time_agents.hpp"
#include "negotiation/training/loops.hpp"
#include "negotiation/training/rewards.hpp"
#include "negotiation/training/updates.hpp"

using namespace negotiation;
using namespace negotiation::training;

namespace {

// Proposes a fixed division; accepts exactly at accept_round (0 = never).
class Scripted : public Agent {
 public:
  Scripted(Offer proposal, int accept_round)
      : proposal_(std::move(proposal)), accept_round_(accept_round) {}
  Offer propose(int, Rng&) override { return proposal_; }
  bool decide(const Offer&, int round, Rng&) override {
    return round == accept_round_;
  }

 private:
  Offer proposal_;
  int accept_round_;
};

}  // namespace

TEST_CASE("terminal rewards") {
  const Scenario sc = Scenario::default_multivariate();

  SUBCASE("conflict pays -K to both") {
    Hardliner a, b;
    Rng rng(1);
    Transcript t = run_negotiation(a, b, sc, rng);
    CHECK_FALSE(t.accepted());
    const auto [ra, rb] = assign_rewards(t, sc);
    CHECK(ra == -1.0);
    CHECK(rb == -1.0);
    CHECK(t.reward_a == -1.0);
  }

  SUBCASE("first-round acceptance pays undiscounted utilities") {
    Scripted a(Offer({0.0, 0.5, 1.0}), 0);
    Scripted b(Offer({1.0, 1.0, 1.0}), 1);
    Rng rng(2);
    Transcript t = run_negotiation(a, b, sc, rng);
    REQUIRE(t.accepted());
    REQUIRE(t.end_round == 1);
    const auto [ra, rb] = assign_rewards(t, sc);
    CHECK(ra == doctest::Approx(4.0));  // (1,2,3) . (0,0.5,1)
    CHECK(rb == doctest::Approx(4.0));  // (3,2,1) . (1,0.5,0)
  }

  SUBCASE("round-3 acceptance discounts by delta^2") {
    Scenario disc = sc;
    disc.discount = 0.9;
    Scripted a(Offer({0.0, 0.5, 1.0}), 0);
    Scripted b(Offer({1.0, 1.0, 1.0}), 3);
    Rng rng(3);
    Transcript t = run_negotiation(a, b, disc, rng);
    REQUIRE(t.accepted());
    REQUIRE(t.end_round == 3);
    const auto [ra, rb] = assign_rewards(t, disc);
    CHECK(ra == doctest::Approx(4.0 * 0.81));
    CHECK(rb == doctest::Approx(4.0 * 0.81));
  }

  SUBCASE("acceptance in the final round still pays the conflict penalty") {
    Scripted a(Offer({0.5, 0.5, 0.5}), 20);  // accepts B's round-20 offer
    Scripted b(Offer({0.2, 0.2, 0.2}), 0);
    Rng rng(4);
    Transcript t = run_negotiation(a, b, sc, rng);
    REQUIRE(t.accepted());
    REQUIRE(t.end_round == 20);
    const auto [ra, rb] = assign_rewards(t, sc);
    CHECK(ra == -1.0);
    CHECK(rb == -1.0);
  }

  SUBCASE("random play stays inside the reward bounds") {
    RandomWalker a, b;
    Rng rng(5);
    for (int g = 0; g < 50; ++g) {
      Transcript t = run_negotiation(a, b, sc, rng);
      const auto [ra, rb] = assign_rewards(t, sc);
      CHECK(ra >= -1.0);
      CHECK(ra <= 6.0);
      CHECK(rb >= -1.0);
      CHECK(rb <= 6.0);
      if (t.accepted() && t.end_round < sc.deadline) {
        const Offer kept = t.final_offer;
        const Offer recv = received_from(kept);
        const double ua = t.final_proposer == Side::kA
                              ? utility(kept.shares, sc.weights_a, sc.discount,
                                        t.end_round, sc.deadline)
                              : utility(recv.shares, sc.weights_a, sc.discount,
                                        t.end_round, sc.deadline);
        CHECK(ra == doctest::Approx(ua));
      } else {
        CHECK(ra == -1.0);
      }
    }
  }
}

TEST_CASE("policy features append normalized time") {
  const Scenario sc = Scenario::default_multivariate();
  const Offer incoming({0.8, 0.3, 0.1});  // proposer keeps these
  const auto af = accept_features(incoming, 5, sc);
  REQUIRE(af.size() == 4);
  CHECK(af[0] == doctest::Approx(0.2));  // decider receives 1 - share
  CHECK(af[1] == doctest::Approx(0.7));
  CHECK(af[2] == doctest::Approx(0.9));
  CHECK(af[3] == doctest::Approx(0.25));

  const auto cold = offer_features(nullptr, 2, sc);
  REQUIRE(cold.size() == 4);
  CHECK(cold[0] == 0.0);
  CHECK(cold[1] == 0.0);
  CHECK(cold[2] == 0.0);
  CHECK(cold[3] == doctest::Approx(0.1));

  const auto warm = offer_features(&incoming, 10, sc);
  CHECK(warm[0] == doctest::Approx(0.2));
  CHECK(warm[3] == doctest::Approx(0.5));
}

TEST_CASE("binary update worked example on a zeroed net") {
  Rng rng(9);
  neural::ActorCriticNet net =
      neural::build_accept_net({.input_dim = 4, .hidden = 6}, rng);
  for (auto* s : net.stacks())
    std::fill(s->params().begin(), s->params().end(), 0.0);

  BinaryRecord rec{{0.3, 0.4, 0.5, 0.1}, 1};
  auto grads = neural::make_grad_buffer(net.stacks());
  UpdateStats stats;
  accumulate_binary_record(net, rec, 1.0, grads, stats);

  CHECK(stats.records == 1);
  CHECK(stats.mean_critic_loss() == doctest::Approx(1.0));  // TD = 1 - 0
  CHECK(stats.mean_actor_loss() == doctest::Approx(std::numbers::ln2));

  BinaryRecord bad{{0.3, 0.4, 0.5, 0.1}, 7};
  CHECK_THROWS(accumulate_binary_record(net, bad, 1.0, grads, stats));
}

TEST_CASE("TD of zero produces a zero gradient") {
  Rng rng(10);
  neural::ActorCriticNet net =
      neural::build_accept_net({.input_dim = 4, .hidden = 6}, rng);
  const BinaryRecord rec{{0.2, 0.9, 0.6, 0.45}, 0};
  const double reward = net.forward(rec.input).value;  // makes TD exactly 0

  auto grads = neural::make_grad_buffer(net.stacks());
  UpdateStats stats;
  accumulate_binary_record(net, rec, reward, grads, stats);
  CHECK(stats.critic_loss == 0.0);
  CHECK(stats.actor_loss == 0.0);
  for (const auto& g : grads)
    for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("binary actor-critic gradient matches finite differences") {
  Rng rng(12);
  neural::ActorCriticNet net =
      neural::build_accept_net({.input_dim = 4, .hidden = 6}, rng);
  const BinaryRecord rec{{0.15, 0.7, 0.35, 0.6}, 1};
  const double reward = 2.5;

  const auto base = net.forward(rec.input);
  const double td0 = reward - base.value;

  auto grads = neural::make_grad_buffer(net.stacks());
  UpdateStats stats;
  accumulate_binary_record(net, rec, reward, grads, stats);

  // Surrogate with the actor's TD frozen at its base value.
  auto loss = [&]() {
    const auto f = net.forward(rec.input);
    const auto probs = neural::softmax(f.logits);
    const double td = reward - f.value;
    return td * td - td0 * std::log(probs[1]);
  };
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

TEST_CASE("offer update gradient matches finite differences per head") {
  Rng rng(21);
  for (neural::HeadKind head :
       {neural::HeadKind::kNormal, neural::HeadKind::kCauchy,
        neural::HeadKind::kBeta}) {
    neural::OfferNetConfig cfg;
    cfg.head = head;
    cfg.trunk_width = 5;
    cfg.value_width = 5;
    cfg.value_layers = 2;
    cfg.head_width = 4;
    neural::OfferNet net = neural::build_offer_net(cfg, rng);

    OfferRecord rec;
    rec.input = {0.25, 0.5, 0.75, 0.3};
    rec.actions = head == neural::HeadKind::kBeta
                      ? std::vector<double>{0.3, 0.62, 0.81}
                      : std::vector<double>{0.4, -0.2, 1.3};
    const double reward = 1.75;

    const auto base = net.forward(rec.input);
    const double td0 = reward - base.value;

    auto grads = neural::make_grad_buffer(net.stacks());
    UpdateStats stats;
    accumulate_offer_record(net, rec, reward, grads, stats);
    CHECK(stats.records == 1);
    REQUIRE(stats.scale_sum.size() == 3);

    auto loss = [&]() {
      const auto f = net.forward(rec.input);
      const double td = reward - f.value;
      double sum = td * td;
      for (int i = 0; i < 3; ++i) {
        neural::LogProb lp;
        switch (head) {
          case neural::HeadKind::kNormal:
            lp = neural::normal_log_prob(rec.actions[i], f.p1[i], f.p2[i]);
            break;
          case neural::HeadKind::kCauchy:
            lp = neural::cauchy_log_prob(rec.actions[i], f.p1[i], f.p2[i]);
            break;
          default:
            lp = neural::beta_log_prob(rec.actions[i], f.p1[i], f.p2[i]);
            break;
        }
        const double scale = head_entropy_scale(head, f.p1[i], f.p2[i]);
        sum += -td0 * (lp.value + neural::entropy_term(scale, cfg.entropy));
      }
      return sum;
    };

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
              2e-6 + 2e-4 * std::max(std::abs(fd), std::abs(grads[s][i])));
      }
    }
  }
}

TEST_CASE("entropy scale argument per head") {
  CHECK(head_entropy_scale(neural::HeadKind::kNormal, 0.4, 0.7) == 0.7);
  CHECK(head_entropy_scale(neural::HeadKind::kCauchy, 0.4, 0.09) == 0.09);
  CHECK(head_entropy_scale(neural::HeadKind::kBeta, 2.0, 2.0) ==
        doctest::Approx(std::sqrt(0.05)));
}

TEST_CASE("episode updates mean-normalize by the record count") {
  Rng rng(31);
  neural::ActorCriticNet one =
      neural::build_accept_net({.input_dim = 4, .hidden = 6}, rng);
  neural::ActorCriticNet two = one;  // identical weights

  const BinaryRecord rec{{0.6, 0.1, 0.9, 0.25}, 1};
  const double reward = 3.0;

  auto g1 = neural::make_grad_buffer(one.stacks());
  UpdateStats s1;
  accumulate_binary_record(one, rec, reward, g1, s1);
  neural::AdamState a1 = neural::AdamState::create(one.stacks(), {.lr = 1e-2});
  apply_episode_update(a1, one.stacks(), g1, s1.records);

  auto g2 = neural::make_grad_buffer(two.stacks());
  UpdateStats s2;
  accumulate_binary_record(two, rec, reward, g2, s2);
  accumulate_binary_record(two, rec, reward, g2, s2);
  neural::AdamState a2 = neural::AdamState::create(two.stacks(), {.lr = 1e-2});
  apply_episode_update(a2, two.stacks(), g2, s2.records);

  // Summing the same record twice and dividing by two must give the exact
  // same step as the single record.
  const auto st1 = one.stacks();
  const auto st2 = two.stacks();
  for (std::size_t s = 0; s < st1.size(); ++s)
    for (std::size_t i = 0; i < st1[s]->param_count(); ++i)
      CHECK(st1[s]->params()[i] == st2[s]->params()[i]);

  // Empty episodes leave everything untouched.
  auto before = one.stacks()[0]->params();
  zero_grads(g1);
  apply_episode_update(a1, one.stacks(), g1, 0);
  CHECK(one.stacks()[0]->params() == before);
}

namespace {

AcceptTrainConfig tiny_accept_config(std::uint64_t seed, int epochs) {
  AcceptTrainConfig cfg;
  cfg.opponent.c = 10.0;
  cfg.hidden = 16;
  cfg.common.epochs = epochs;
  cfg.common.master_seed = seed;
  cfg.common.eval_games = 4;
  return cfg;
}

}  // namespace

TEST_CASE("training runs are deterministic per seed") {
  const TrainOutcome a = train_accept(tiny_accept_config(11, 25));
  const TrainOutcome b = train_accept(tiny_accept_config(11, 25));
  CHECK(neural::serialize_checkpoint(a.checkpoint) ==
        neural::serialize_checkpoint(b.checkpoint));
  REQUIRE(a.metrics.size() == 25);
  REQUIRE(b.metrics.size() == 25);
  std::ostringstream ma, mb;
  write_metrics_csv(ma, a.metrics);
  write_metrics_csv(mb, b.metrics);
  CHECK(ma.str() == mb.str());

  const TrainOutcome c = train_accept(tiny_accept_config(12, 25));
  CHECK(neural::serialize_checkpoint(a.checkpoint) !=
        neural::serialize_checkpoint(c.checkpoint));
}

TEST_CASE("resumed training continues the run byte-exactly") {
  const TrainOutcome full = train_accept(tiny_accept_config(13, 6));

  AcceptTrainConfig half = tiny_accept_config(13, 3);
  const TrainOutcome first = train_accept(half);
  CHECK(first.checkpoint.epochs_trained == 3);
  const TrainOutcome second = train_accept(half, &first.checkpoint);
  CHECK(second.checkpoint.epochs_trained == 6);
  CHECK(second.metrics.front().epoch == 4);
  CHECK(second.metrics.back().epoch == 6);
  CHECK(neural::serialize_checkpoint(second.checkpoint) ==
        neural::serialize_checkpoint(full.checkpoint));

  // Epoch rows 4..6 of the full run match the resumed leg exactly.
  std::ostringstream tail, cont;
  write_metrics_csv(tail, std::span<const EpochMetrics>(full.metrics).subspan(3));
  write_metrics_csv(cont, second.metrics);
  CHECK(tail.str() == cont.str());

  // Architecture mismatches are rejected.
  AcceptTrainConfig other = tiny_accept_config(13, 3);
  other.hidden = 8;
  CHECK_THROWS_AS((void)train_accept(other, &first.checkpoint),
                  std::runtime_error);
}

TEST_CASE("metrics rows stay inside reward and time bounds") {
  const TrainOutcome out = train_accept(tiny_accept_config(14, 40));
  REQUIRE(out.metrics.size() == 40);
  int conflicts = 0;
  for (std::size_t i = 0; i < out.metrics.size(); ++i) {
    const EpochMetrics& r = out.metrics[i];
    CHECK(r.epoch == static_cast<int>(i) + 1);
    CHECK(r.reward_p1 >= -1.0);
    CHECK(r.reward_p1 <= 6.0);
    CHECK(r.reward_p2 >= -1.0);
    CHECK(r.reward_p2 <= 6.0);
    CHECK(r.playout_time >= 1.0);
    CHECK(r.playout_time <= 20.0);
    CHECK(std::isnan(r.mean_sigma[0]));  // categorical policy: no scale stat
    if (r.reward_p2 < 0.0) ++conflicts;
  }
  CHECK(out.conflict_episodes <= conflicts);
  CHECK_FALSE(out.halted);
  CHECK(out.eval.summary.games == 4);
  CHECK(out.eval.transcripts.size() == 4);
}

TEST_CASE("early stopping window") {
  AcceptTrainConfig cfg = tiny_accept_config(15, 200);
  cfg.common.early_stop_window = 5;
  cfg.common.early_stop_std = 1e9;  // any window qualifies
  const TrainOutcome out = train_accept(cfg);
  CHECK(out.early_stopped);
  CHECK(out.metrics.size() == 5);

  cfg.common.early_stop_std = 0.0;  // disabled
  cfg.common.epochs = 12;
  const TrainOutcome full = train_accept(cfg);
  CHECK_FALSE(full.early_stopped);
  CHECK(full.metrics.size() == 12);
}

TEST_CASE("checkpoint callback fires on the configured cadence") {
  AcceptTrainConfig cfg = tiny_accept_config(16, 10);
  cfg.common.checkpoint_every = 4;
  std::vector<int> seen;
  cfg.common.on_checkpoint = [&](const neural::Checkpoint& c, int epoch) {
    seen.push_back(epoch);
    CHECK(c.epochs_trained == static_cast<std::uint64_t>(epoch));
  };
  (void)train_accept(cfg);
  REQUIRE(seen.size() == 3);  // epochs 4, 8 and the terminal one
  CHECK(seen[0] == 4);
  CHECK(seen[1] == 8);
  CHECK(seen[2] == 10);
}

TEST_CASE("metrics csv golden row") {
  EpochMetrics r;
  r.epoch = 1;
  r.reward_p1 = 4.0;
  r.reward_p2 = 4.0;
  r.playout_time = 1.0;
  r.critic_loss = 0.25;
  r.actor_loss = 0.5;
  r.mean_sigma = {std::nan(""), std::nan(""), std::nan("")};
  std::ostringstream os;
  write_metrics_csv(os, std::vector<EpochMetrics>{r});
  CHECK(os.str() ==
        "# schema: negotiation.metrics v1\n"
        "epoch,reward_p1,reward_p2,playout_time,critic_loss,actor_loss,"
        "mean_sigma_1,mean_sigma_2,mean_sigma_3\n"
        "1,4,4,1,0.25,0.5,nan,nan,nan\n");
}

TEST_CASE("every training mode runs end to end at toy scale") {
  OfferTrainConfig offer;
  offer.opponent.c = 1.0;
  offer.net.trunk_width = 8;
  offer.net.value_width = 8;
  offer.net.value_layers = 2;
  offer.net.head_width = 4;
  offer.common.epochs = 8;
  offer.common.eval_games = 2;
  offer.common.master_seed = 21;
  const TrainOutcome o = train_offer(offer);
  CHECK(o.metrics.size() == 8);
  REQUIRE(o.checkpoint.policies.size() == 1);
  CHECK(o.checkpoint.policies[0].kind == neural::PolicyKind::kOffer);
  bool saw_sigma = false;
  for (const auto& r : o.metrics)
    if (!std::isnan(r.mean_sigma[0])) saw_sigma = true;
  CHECK(saw_sigma);

  TftTrainConfig tft;
  tft.accept_hidden = 8;
  tft.net.trunk_width = 8;
  tft.net.value_width = 8;
  tft.net.value_layers = 2;
  tft.net.head_width = 4;
  tft.common.epochs = 6;
  tft.common.eval_games = 2;
  tft.common.master_seed = 22;
  const TrainOutcome t = train_tft(tft);
  CHECK(t.metrics.size() == 6);
  REQUIRE(t.checkpoint.policies.size() == 2);
  CHECK(t.checkpoint.policies[0].kind == neural::PolicyKind::kAccept);
  CHECK(t.checkpoint.policies[1].kind == neural::PolicyKind::kOffer);

  tft.variant = TftVariant::kBayesian;
  const TrainOutcome tb = train_tft(tft);
  CHECK(tb.metrics.size() == 6);

  MinigameTrainConfig mini;
  mini.hidden = 8;
  mini.common.epochs = 10;
  mini.common.eval_games = 2;
  mini.common.master_seed = 23;
  const TrainOutcome m = train_minigame(mini);
  CHECK(m.metrics.size() == 10);
  REQUIRE(m.checkpoint.policies.size() == 4);
  CHECK(m.checkpoint.policies[0].kind == neural::PolicyKind::kMinigameOffer);
  for (const auto& r : m.metrics) {
    CHECK(r.playout_time >= 1.0);
    CHECK(r.playout_time <= 20.0);
  }

  mini.centipede = true;
  mini.discount = 1.3;
  const TrainOutcome mc = train_minigame(mini);
  CHECK(mc.metrics.size() == 10);

  MultivariateTrainConfig multi;
  multi.accept_hidden = 8;
  multi.net.trunk_width = 8;
  multi.net.value_width = 8;
  multi.net.value_layers = 2;
  multi.net.head_width = 4;
  multi.common.epochs = 6;
  multi.common.eval_games = 2;
  multi.common.master_seed = 24;
  const TrainOutcome mv = train_multivariate(multi);
  CHECK(mv.metrics.size() == 6);
  REQUIRE(mv.checkpoint.policies.size() == 2);
  CHECK(mv.checkpoint.policies[0].kind == neural::PolicyKind::kOffer);
  CHECK(mv.checkpoint.policies[1].kind == neural::PolicyKind::kAccept);
}

TEST_CASE("zero learning rate leaves parameters at their init") {
  AcceptTrainConfig cfg = tiny_accept_config(25, 1);
  cfg.common.adam.lr = 0.0;
  const TrainOutcome one = train_accept(cfg);
  cfg.common.epochs = 30;
  const TrainOutcome many = train_accept(cfg);
  REQUIRE(one.checkpoint.policies.size() == 1);
  REQUIRE(many.checkpoint.policies.size() == 1);
  const auto& na = *one.checkpoint.policies[0].binary;
  const auto& nb = *many.checkpoint.policies[0].binary;
  const auto sa = na.stacks();
  const auto sb = nb.stacks();
  REQUIRE(sa.size() == sb.size());
  for (std::size_t s = 0; s < sa.size(); ++s)
    CHECK(sa[s]->params() == sb[s]->params());
}
