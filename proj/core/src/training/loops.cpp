#include "negotiation/training/loops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "negotiation/csv.hpp"
#include "negotiation/frontier.hpp"
#include "negotiation/neural/distributions.hpp"
#include "negotiation/tft_agents.hpp"
#include "negotiation/time_agents.hpp"
#include "negotiation/training/rewards.hpp"

namespace negotiation::training {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sample_binary(const neural::ActorCriticNet& net, std::vector<double> input,
                  Rng& rng, std::vector<BinaryRecord>& records) {
  const auto fwd = net.forward(input);
  const std::vector<double> probs = neural::softmax(fwd.logits);
  const int action = neural::categorical_sample(rng, probs);
  records.push_back({std::move(input), action});
  return action;
}

}  // namespace

std::vector<double> accept_features(const Offer& incoming, int round,
                                    const Scenario& scenario) {
  std::vector<double> f = received_from(incoming).shares;
  f.push_back(static_cast<double>(round) / scenario.deadline);
  return f;
}

std::vector<double> offer_features(const Offer* last_received, int round,
                                   const Scenario& scenario) {
  std::vector<double> f(static_cast<std::size_t>(scenario.issues()), 0.0);
  if (last_received) f = received_from(*last_received).shares;
  f.push_back(static_cast<double>(round) / scenario.deadline);
  return f;
}

void NeuralParty::begin_game(const Scenario& scenario, Side side) {
  Agent::begin_game(scenario, side);
  last_received_.reset();
  accept_records.clear();
  offer_records.clear();
  choice_records.clear();
}

Offer NeuralParty::propose(int round, Rng& rng) {
  const Scenario& sc = *scenario_;
  const Offer* last = last_received_ ? &*last_received_ : nullptr;
  if (choice_net) {
    const int action =
        sample_binary(*choice_net, offer_features(last, round, sc), rng,
                      choice_records);
    return Offer(std::vector<double>(
        static_cast<std::size_t>(sc.issues()),
        kMinigameKeep[static_cast<std::size_t>(action)]));
  }
  if (offer_net) {
    std::vector<double> input = offer_features(last, round, sc);
    const auto fwd = offer_net->forward(input);
    const int m = offer_net->cfg.issues;
    std::vector<double> actions(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      switch (offer_net->cfg.head) {
        case neural::HeadKind::kNormal:
          actions[i] = neural::normal_sample(rng, fwd.p1[i], fwd.p2[i]);
          break;
        case neural::HeadKind::kCauchy:
          actions[i] = neural::cauchy_sample(rng, fwd.p1[i], fwd.p2[i]);
          break;
        case neural::HeadKind::kBeta:
          // Kept away from the exact endpoints so the stored action stays
          // inside the log-density's support.
          actions[i] = std::clamp(
              neural::beta_sample(rng, fwd.p1[i], fwd.p2[i]), 1e-12,
              1.0 - 1e-12);
          break;
        case neural::HeadKind::kCategorical:
          throw std::logic_error("NeuralParty: categorical offer head");
      }
    }
    offer_records.push_back({std::move(input), actions});
    return Offer(std::move(actions));
  }
  return hardliner_offer(sc.issues());
}

bool NeuralParty::decide(const Offer& incoming, int round, Rng& rng) {
  if (!accept_net) return false;
  const int action =
      sample_binary(*accept_net, accept_features(incoming, round, *scenario_),
                    rng, accept_records);
  return action == 1;
}

void NeuralParty::observe(const Offer& opponent_offer, int) {
  last_received_ = opponent_offer;
}

const char kMetricsSchema[] = "# schema: negotiation.metrics v1";

void write_metrics_csv(std::ostream& os, std::span<const EpochMetrics> rows) {
  os << kMetricsSchema << '\n'
     << "epoch,reward_p1,reward_p2,playout_time,critic_loss,actor_loss,"
        "mean_sigma_1,mean_sigma_2,mean_sigma_3\n";
  for (const EpochMetrics& r : rows) {
    os << r.epoch << ',' << csv_double(r.reward_p1) << ','
       << csv_double(r.reward_p2) << ',' << csv_double(r.playout_time) << ','
       << csv_double(r.critic_loss) << ',' << csv_double(r.actor_loss);
    for (double s : r.mean_sigma) os << ',' << csv_double(s);
    os << '\n';
  }
}

EvalResult evaluate_games(Agent& agent_a, Agent& agent_b,
                          const Scenario& scenario, int games, Rng& rng) {
  EvalResult res;
  res.summary.games = games;
  if (games <= 0) {
    res.summary = {0, kNaN, kNaN, kNaN, kNaN, kNaN};
    return res;
  }
  const Frontier frontier = pareto_frontier(scenario);
  const OutcomePoint nash = nash_solution(scenario).outcome;
  double sum_a = 0.0, sum_b = 0.0, sum_t = 0.0;
  std::vector<OutcomePoint> outcomes;
  for (int g = 0; g < games; ++g) {
    Transcript t = run_negotiation(agent_a, agent_b, scenario, rng);
    assign_rewards(t, scenario);
    sum_a += t.reward_a;
    sum_b += t.reward_b;
    sum_t += t.end_round;
    if (t.accepted() && t.end_round < scenario.deadline) {
      const Offer kept_by_a = t.final_proposer == Side::kA
                                  ? t.final_offer
                                  : received_from(t.final_offer);
      outcomes.push_back(outcome_point(scenario, kept_by_a));
    }
    res.transcripts.push_back(std::move(t));
  }
  res.summary.mean_reward_p1 = sum_a / games;
  res.summary.mean_reward_p2 = sum_b / games;
  res.summary.mean_time = sum_t / games;
  res.summary.bid_distribution =
      outcomes.empty() ? kNaN : bid_distribution(frontier, outcomes);
  res.summary.nash_distance =
      outcomes.empty() ? kNaN : mean_nash_distance(outcomes, nash);
  return res;
}

namespace {

// One trainable net: where its decisions are recorded, whose terminal
// reward feeds its TD, and its optimizer state.
struct NetBinding {
  neural::PolicyKind kind = neural::PolicyKind::kAccept;
  neural::ActorCriticNet* binary = nullptr;
  neural::OfferNet* offer = nullptr;
  std::vector<BinaryRecord>* binary_records = nullptr;
  std::vector<OfferRecord>* offer_records = nullptr;
  Side reward_side = Side::kA;
  neural::AdamState adam;
  std::vector<std::vector<double>> grads;

  std::vector<neural::LayerStack*> stacks() {
    return binary ? binary->stacks() : offer->stacks();
  }
};

NetBinding make_binary_binding(neural::PolicyKind kind,
                               neural::ActorCriticNet* net,
                               std::vector<BinaryRecord>* records, Side side,
                               const neural::AdamConfig& adam) {
  NetBinding b;
  b.kind = kind;
  b.binary = net;
  b.binary_records = records;
  b.reward_side = side;
  b.adam = neural::AdamState::create(net->stacks(), adam);
  b.grads = neural::make_grad_buffer(net->stacks());
  return b;
}

NetBinding make_offer_binding(neural::OfferNet* net,
                              std::vector<OfferRecord>* records, Side side,
                              const neural::AdamConfig& adam) {
  NetBinding b;
  b.kind = neural::PolicyKind::kOffer;
  b.offer = net;
  b.offer_records = records;
  b.reward_side = side;
  b.adam = neural::AdamState::create(net->stacks(), adam);
  b.grads = neural::make_grad_buffer(net->stacks());
  return b;
}

neural::Checkpoint make_checkpoint(std::uint64_t master_seed,
                                   const Rng& train_rng,
                                   std::uint64_t epochs_trained,
                                   const std::vector<NetBinding>& nets) {
  neural::Checkpoint ckpt;
  ckpt.master_seed = master_seed;
  ckpt.rng_state = train_rng.state();
  ckpt.epochs_trained = epochs_trained;
  for (const NetBinding& nb : nets) {
    neural::TrainedPolicy p;
    p.kind = nb.kind;
    if (nb.binary) p.binary = *nb.binary;
    if (nb.offer) p.offer = *nb.offer;
    p.adam = nb.adam;
    ckpt.policies.push_back(std::move(p));
  }
  return ckpt;
}

void apply_resume(const neural::Checkpoint& ckpt,
                  std::vector<NetBinding>& nets) {
  if (ckpt.policies.size() != nets.size())
    throw std::runtime_error("resume: checkpoint policy count mismatch");
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const neural::TrainedPolicy& p = ckpt.policies[i];
    NetBinding& nb = nets[i];
    if (p.kind != nb.kind)
      throw std::runtime_error("resume: checkpoint policy kind mismatch");
    if (nb.binary) {
      if (!p.binary || !(p.binary->cfg == nb.binary->cfg))
        throw std::runtime_error("resume: checkpoint architecture mismatch");
      *nb.binary = *p.binary;
    } else {
      if (!p.offer || !(p.offer->cfg == nb.offer->cfg))
        throw std::runtime_error("resume: checkpoint architecture mismatch");
      *nb.offer = *p.offer;
    }
    nb.adam = p.adam;
  }
}

TrainOutcome run_training(const Scenario& scenario, Agent& agent_a,
                          Agent& agent_b, std::vector<NetBinding>& nets,
                          const CommonTrainConfig& cc,
                          const neural::Checkpoint* resume) {
  scenario.validate();
  TrainOutcome out;
  Rng train_rng(derive_seed(cc.master_seed, 1));
  std::uint64_t done = 0;
  if (resume) {
    apply_resume(*resume, nets);
    train_rng.set_state(resume->rng_state);
    done = resume->epochs_trained;
  }

  std::deque<double> window;
  bool warned_collapse = false;
  std::vector<UpdateStats> stats(nets.size());

  for (int e = 1; e <= cc.epochs; ++e) {
    Transcript t = run_negotiation(agent_a, agent_b, scenario, train_rng);
    assign_rewards(t, scenario);
    if (!t.accepted()) ++out.conflict_episodes;

    bool finite = true;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      NetBinding& nb = nets[i];
      stats[i] = UpdateStats{};
      zero_grads(nb.grads);
      const double reward =
          nb.reward_side == Side::kA ? t.reward_a : t.reward_b;
      if (nb.binary) {
        for (const BinaryRecord& r : *nb.binary_records)
          accumulate_binary_record(*nb.binary, r, reward, nb.grads, stats[i]);
      } else {
        for (const OfferRecord& r : *nb.offer_records)
          accumulate_offer_record(*nb.offer, r, reward, nb.grads, stats[i]);
      }
      if (!std::isfinite(stats[i].critic_loss) ||
          !std::isfinite(stats[i].actor_loss))
        finite = false;
    }
    if (!finite) {
      out.halted = true;
      out.warnings.push_back("non-finite loss at epoch " +
                             std::to_string(done + 1) + "; training halted");
      break;
    }
    for (std::size_t i = 0; i < nets.size(); ++i)
      apply_episode_update(nets[i].adam, nets[i].stacks(), nets[i].grads,
                           stats[i].records);
    ++done;

    EpochMetrics row;
    row.epoch = static_cast<int>(done);
    row.reward_p1 = t.reward_a;
    row.reward_p2 = t.reward_b;
    row.playout_time = t.end_round;
    row.mean_sigma = {kNaN, kNaN, kNaN};
    double closs = 0.0, aloss = 0.0;
    int records = 0;
    for (std::size_t i = 0; i < nets.size(); ++i) {
      closs += stats[i].critic_loss;
      aloss += stats[i].actor_loss;
      records += stats[i].records;
      if (nets[i].offer && stats[i].records > 0) {
        const std::vector<double> means = stats[i].mean_scale();
        for (std::size_t j = 0; j < means.size() && j < 3; ++j)
          row.mean_sigma[j] = means[j];
        if (!warned_collapse && stats[i].scale_evals > 0 &&
            stats[i].scale_floor_hits >
                0.9 * static_cast<double>(stats[i].scale_evals)) {
          out.warnings.push_back("variance collapse: scale at floor for >90% "
                                 "of steps at epoch " +
                                 std::to_string(done));
          warned_collapse = true;
        }
      }
    }
    row.critic_loss = records > 0 ? closs / records : 0.0;
    row.actor_loss = records > 0 ? aloss / records : 0.0;
    out.metrics.push_back(row);

    window.push_back(row.playout_time);
    if (static_cast<int>(window.size()) > cc.early_stop_window)
      window.pop_front();
    if (cc.early_stop_std > 0.0 && cc.early_stop_window > 0 &&
        static_cast<int>(window.size()) == cc.early_stop_window) {
      double mean = 0.0;
      for (double v : window) mean += v;
      mean /= static_cast<double>(window.size());
      double var = 0.0;
      for (double v : window) var += (v - mean) * (v - mean);
      var /= static_cast<double>(window.size());
      if (std::sqrt(var) < cc.early_stop_std) {
        out.early_stopped = true;
        break;
      }
    }

    if (cc.checkpoint_every > 0 && cc.on_checkpoint &&
        e % cc.checkpoint_every == 0 && e < cc.epochs)
      cc.on_checkpoint(
          make_checkpoint(cc.master_seed, train_rng, done, nets),
          static_cast<int>(done));
  }

  out.checkpoint = make_checkpoint(cc.master_seed, train_rng, done, nets);
  if (cc.on_checkpoint)
    cc.on_checkpoint(out.checkpoint, static_cast<int>(done));

  Rng eval_rng(derive_seed(cc.master_seed, 2));
  out.eval = evaluate_games(agent_a, agent_b, scenario, cc.eval_games,
                            eval_rng);
  return out;
}

}  // namespace

TrainOutcome train_accept(const AcceptTrainConfig& cfg,
                          const neural::Checkpoint* resume) {
  Rng init(derive_seed(cfg.common.master_seed, 0));
  neural::ActorCriticConfig nc;
  nc.input_dim = cfg.scenario.issues() + 1;
  nc.hidden = cfg.hidden;
  neural::ActorCriticNet net = neural::build_accept_net(nc, init);

  TimeAgent opponent(cfg.opponent);
  NeuralParty learner;
  learner.accept_net = &net;

  std::vector<NetBinding> nets;
  nets.push_back(make_binary_binding(neural::PolicyKind::kAccept, &net,
                                     &learner.accept_records, Side::kB,
                                     cfg.common.adam));
  return run_training(cfg.scenario, opponent, learner, nets, cfg.common,
                      resume);
}

TrainOutcome train_offer(const OfferTrainConfig& cfg,
                         const neural::Checkpoint* resume) {
  Rng init(derive_seed(cfg.common.master_seed, 0));
  neural::OfferNetConfig nc = cfg.net;
  nc.input_dim = cfg.scenario.issues() + 1;
  nc.issues = cfg.scenario.issues();
  neural::OfferNet net = neural::build_offer_net(nc, init);

  NeuralParty learner;
  learner.offer_net = &net;
  TimeAgent opponent(cfg.opponent);

  std::vector<NetBinding> nets;
  nets.push_back(make_offer_binding(&net, &learner.offer_records, Side::kA,
                                    cfg.common.adam));
  return run_training(cfg.scenario, learner, opponent, nets, cfg.common,
                      resume);
}

TrainOutcome train_tft(const TftTrainConfig& cfg,
                       const neural::Checkpoint* resume) {
  Rng init(derive_seed(cfg.common.master_seed, 0));
  neural::ActorCriticConfig ac;
  ac.input_dim = cfg.scenario.issues() + 1;
  ac.hidden = cfg.accept_hidden;
  neural::ActorCriticNet accept_net = neural::build_accept_net(ac, init);
  neural::OfferNetConfig oc = cfg.net;
  oc.input_dim = cfg.scenario.issues() + 1;
  oc.issues = cfg.scenario.issues();
  neural::OfferNet offer_net = neural::build_offer_net(oc, init);

  NeuralParty learner;
  learner.accept_net = &accept_net;
  learner.offer_net = &offer_net;

  RelativeTftAgent relative{TftConfig{.delta = cfg.tft_delta}};
  BayesianTftAgent bayesian{cfg.tft_delta};
  Agent& opponent = cfg.variant == TftVariant::kRelative
                        ? static_cast<Agent&>(relative)
                        : static_cast<Agent&>(bayesian);

  std::vector<NetBinding> nets;
  nets.push_back(make_binary_binding(neural::PolicyKind::kAccept, &accept_net,
                                     &learner.accept_records, Side::kB,
                                     cfg.common.adam));
  nets.push_back(make_offer_binding(&offer_net, &learner.offer_records,
                                    Side::kB, cfg.common.adam));
  return run_training(cfg.scenario, opponent, learner, nets, cfg.common,
                      resume);
}

TrainOutcome train_minigame(const MinigameTrainConfig& cfg,
                            const neural::Checkpoint* resume) {
  const Scenario scenario = Scenario::univariate(cfg.discount, cfg.centipede);
  Rng init(derive_seed(cfg.common.master_seed, 0));
  neural::ActorCriticConfig nc;
  nc.input_dim = scenario.issues() + 1;
  nc.hidden = cfg.hidden;
  neural::ActorCriticNet p1_choice = neural::build_accept_net(nc, init);
  neural::ActorCriticNet p1_accept = neural::build_accept_net(nc, init);
  neural::ActorCriticNet p2_choice = neural::build_accept_net(nc, init);
  neural::ActorCriticNet p2_accept = neural::build_accept_net(nc, init);

  NeuralParty p1, p2;
  p1.choice_net = &p1_choice;
  p1.accept_net = &p1_accept;
  p2.choice_net = &p2_choice;
  p2.accept_net = &p2_accept;

  std::vector<NetBinding> nets;
  nets.push_back(make_binary_binding(neural::PolicyKind::kMinigameOffer,
                                     &p1_choice, &p1.choice_records, Side::kA,
                                     cfg.common.adam));
  nets.push_back(make_binary_binding(neural::PolicyKind::kAccept, &p1_accept,
                                     &p1.accept_records, Side::kA,
                                     cfg.common.adam));
  nets.push_back(make_binary_binding(neural::PolicyKind::kMinigameOffer,
                                     &p2_choice, &p2.choice_records, Side::kB,
                                     cfg.common.adam));
  nets.push_back(make_binary_binding(neural::PolicyKind::kAccept, &p2_accept,
                                     &p2.accept_records, Side::kB,
                                     cfg.common.adam));
  return run_training(scenario, p1, p2, nets, cfg.common, resume);
}

TrainOutcome train_multivariate(const MultivariateTrainConfig& cfg,
                                const neural::Checkpoint* resume) {
  Rng init(derive_seed(cfg.common.master_seed, 0));
  neural::OfferNetConfig oc = cfg.net;
  oc.input_dim = cfg.scenario.issues() + 1;
  oc.issues = cfg.scenario.issues();
  neural::OfferNet offer_net = neural::build_offer_net(oc, init);
  neural::ActorCriticConfig ac;
  ac.input_dim = cfg.scenario.issues() + 1;
  ac.hidden = cfg.accept_hidden;
  neural::ActorCriticNet accept_net = neural::build_accept_net(ac, init);

  NeuralParty proposer;  // always rejects: no accept net
  proposer.offer_net = &offer_net;
  NeuralParty acceptor;  // proposes hardline pro forma: no offer net
  acceptor.accept_net = &accept_net;

  std::vector<NetBinding> nets;
  nets.push_back(make_offer_binding(&offer_net, &proposer.offer_records,
                                    Side::kA, cfg.common.adam));
  nets.push_back(make_binary_binding(neural::PolicyKind::kAccept, &accept_net,
                                     &acceptor.accept_records, Side::kB,
                                     cfg.common.adam));
  return run_training(cfg.scenario, proposer, acceptor, nets, cfg.common,
                      resume);
}

}  // namespace negotiation::training
