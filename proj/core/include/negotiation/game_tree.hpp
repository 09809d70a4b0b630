#ifndef NEGOTIATION_GAME_TREE_HPP_
#define NEGOTIATION_GAME_TREE_HPP_

#include <array>
#include <vector>

namespace negotiation {

// A two-move sequential game: at node i the owning player either terminates
// for the listed payoff pair or continues to node i+1. Continuing past the
// last node yields continue_payoff.
struct GameTreeNode {
  int player = 0;  // 0 or 1
  std::array<double, 2> terminate_payoff{};
};

struct GameTree {
  std::vector<GameTreeNode> nodes;
  std::array<double, 2> continue_payoff{};
};

struct SpneResult {
  std::vector<bool> terminate;       // SPNE action per node
  std::array<double, 2> value{};     // payoff at the root under the SPNE
  int stop_node = -1;                // first terminating node; -1 = play out
};

// Backward induction; ties between terminating and continuing go to
// terminate.
SpneResult backward_induction(const GameTree& tree);

// Six-round centipede instance: the pie grows by 1 each round, the mover
// takes the 90/10 split, and playing to the end splits 7 evenly.
GameTree builtin_centipede_tree();

// Six-round alternating bargaining instance: the pie shrinks by the decay
// factor each round, terminating gives the mover keep_fraction of the
// current pie, and playing past the last round yields (0, 0).
GameTree builtin_bargaining_tree(double decay = 0.9, int rounds = 6,
                                 double keep_fraction = 0.9);

}  // namespace negotiation

#endif  // NEGOTIATION_GAME_TREE_HPP_
