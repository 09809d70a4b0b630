#ifndef NEGOTIATION_SIMPLEX_HPP_
#define NEGOTIATION_SIMPLEX_HPP_

#include <span>
#include <vector>

namespace negotiation {

struct SimplexResult {
  enum class Status { kOptimal, kInfeasible };
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double value = 0.0;

  bool optimal() const { return status == Status::kOptimal; }
};

// Maximize objective . x subject to eq_lhs[r] . x = eq_rhs[r] for every row
// and 0 <= x_i <= 1. Two-phase dense simplex with Bland's rule; the box is
// part of the problem so every optimum returned is a vertex of the feasible
// polytope. Ties are broken toward the lexicographically smallest vertex by
// sequentially minimizing x_1, x_2, ... at the optimal value.
SimplexResult simplex_solve(std::span<const double> objective,
                            const std::vector<std::vector<double>>& eq_lhs,
                            std::span<const double> eq_rhs);

}  // namespace negotiation

#endif  // NEGOTIATION_SIMPLEX_HPP_
