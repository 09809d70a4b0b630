#include "negotiation/game_tree.hpp"

#include <cmath>
#include <stdexcept>

namespace negotiation {

SpneResult backward_induction(const GameTree& tree) {
  for (const auto& n : tree.nodes)
    if (n.player != 0 && n.player != 1)
      throw std::invalid_argument("backward_induction: player must be 0 or 1");

  SpneResult res;
  const int n = static_cast<int>(tree.nodes.size());
  res.terminate.assign(n, false);
  std::array<double, 2> cont = tree.continue_payoff;
  for (int i = n - 1; i >= 0; --i) {
    const GameTreeNode& node = tree.nodes[i];
    const bool take = node.terminate_payoff[node.player] >= cont[node.player];
    res.terminate[i] = take;
    if (take) cont = node.terminate_payoff;
  }
  res.value = cont;
  for (int i = 0; i < n; ++i) {
    if (res.terminate[i]) {
      res.stop_node = i;
      break;
    }
  }
  return res;
}

GameTree builtin_centipede_tree() {
  GameTree t;
  t.nodes = {
      {0, {0.9, 0.1}}, {1, {0.2, 1.8}}, {0, {2.7, 0.3}},
      {1, {0.4, 3.6}}, {0, {4.5, 0.5}}, {1, {0.6, 5.4}},
  };
  t.continue_payoff = {3.5, 3.5};
  return t;
}

GameTree builtin_bargaining_tree(double decay, int rounds,
                                 double keep_fraction) {
  if (rounds < 1) throw std::invalid_argument("bargaining tree: rounds must be >= 1");
  GameTree t;
  for (int i = 0; i < rounds; ++i) {
    const double pie = std::pow(decay, i);
    GameTreeNode node;
    node.player = i % 2;
    node.terminate_payoff[node.player] = keep_fraction * pie;
    node.terminate_payoff[1 - node.player] = (1.0 - keep_fraction) * pie;
    t.nodes.push_back(node);
  }
  t.continue_payoff = {0.0, 0.0};
  return t;
}

}  // namespace negotiation
