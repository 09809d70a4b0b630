#include "negotiation/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace negotiation {

namespace {

constexpr double kEps = 1e-9;

// Dense tableau for max cost . y s.t. a y = rhs, y >= 0, with Bland's rule.
struct Tableau {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<double>> a;  // rows x (cols + 1); last column = rhs
  std::vector<double> cost;            // cols + 1; last entry = -objective
  std::vector<int> basis;
  std::vector<bool> blocked;           // columns barred from entering

  void canonicalize() {
    for (int i = 0; i < rows; ++i) {
      const double c = cost[basis[i]];
      if (c == 0.0) continue;
      for (int j = 0; j <= cols; ++j) cost[j] -= c * a[i][j];
    }
  }

  void pivot(int row, int col) {
    const double p = a[row][col];
    for (int j = 0; j <= cols; ++j) a[row][j] /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      const double f = a[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) a[i][j] -= f * a[row][j];
    }
    const double f = cost[col];
    if (f != 0.0)
      for (int j = 0; j <= cols; ++j) cost[j] -= f * a[row][j];
    basis[row] = col;
  }

  // Returns false if unbounded (cannot happen for a bounded box polytope).
  bool iterate() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!blocked[j] && cost[j] > kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows; ++i) {
        if (a[i][enter] > kEps) {
          const double ratio = a[i][cols] / a[i][enter];
          if (leave < 0 || ratio < best - kEps ||
              (ratio < best + kEps && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

// One bounded LP solve: max c . x, A x = b, 0 <= x <= 1.
SimplexResult solve_once(std::span<const double> c,
                         const std::vector<std::vector<double>>& eq_lhs,
                         std::span<const double> eq_rhs) {
  const int n = static_cast<int>(c.size());
  const int ne = static_cast<int>(eq_lhs.size());
  const int rows = ne + n;           // equality rows + box rows x_i + s_i = 1
  const int cols = 2 * n + rows;     // x, slacks, artificials

  Tableau t;
  t.rows = rows;
  t.cols = cols;
  t.a.assign(rows, std::vector<double>(cols + 1, 0.0));
  t.cost.assign(cols + 1, 0.0);
  t.basis.resize(rows);
  t.blocked.assign(cols, false);

  for (int r = 0; r < ne; ++r) {
    if (static_cast<int>(eq_lhs[r].size()) != n)
      throw std::invalid_argument("simplex_solve: constraint arity mismatch");
    double rhs = eq_rhs[r];
    double sign = rhs < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) t.a[r][j] = sign * eq_lhs[r][j];
    t.a[r][cols] = sign * rhs;
  }
  for (int i = 0; i < n; ++i) {
    t.a[ne + i][i] = 1.0;
    t.a[ne + i][n + i] = 1.0;
    t.a[ne + i][cols] = 1.0;
  }
  for (int r = 0; r < rows; ++r) {
    t.a[r][2 * n + r] = 1.0;
    t.basis[r] = 2 * n + r;
  }

  // Phase 1: drive artificials to zero.
  for (int r = 0; r < rows; ++r) t.cost[2 * n + r] = -1.0;
  t.canonicalize();
  t.iterate();
  if (-t.cost[cols] > 1e-7) return {};  // infeasible
  for (int r = 0; r < rows; ++r) {
    if (t.basis[r] < 2 * n) continue;
    for (int j = 0; j < 2 * n; ++j) {
      if (std::abs(t.a[r][j]) > kEps) {
        t.pivot(r, j);
        break;
      }
    }
  }
  for (int j = 2 * n; j < cols; ++j) t.blocked[j] = true;

  // Phase 2.
  t.cost.assign(cols + 1, 0.0);
  for (int j = 0; j < n; ++j) t.cost[j] = c[j];
  t.canonicalize();
  t.iterate();

  SimplexResult res;
  res.status = SimplexResult::Status::kOptimal;
  res.x.assign(n, 0.0);
  for (int r = 0; r < rows; ++r)
    if (t.basis[r] < n) res.x[t.basis[r]] = t.a[r][cols];
  res.value = 0.0;
  for (int j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace

SimplexResult simplex_solve(std::span<const double> objective,
                            const std::vector<std::vector<double>>& eq_lhs,
                            std::span<const double> eq_rhs) {
  if (eq_lhs.size() != eq_rhs.size())
    throw std::invalid_argument("simplex_solve: lhs/rhs row count mismatch");
  const int n = static_cast<int>(objective.size());
  if (n == 0) throw std::invalid_argument("simplex_solve: empty objective");

  SimplexResult best = solve_once(objective, eq_lhs, eq_rhs);
  if (!best.optimal()) return best;

  // Lexicographic tie-break: pin the optimal value, then minimize each
  // coordinate in turn.
  std::vector<std::vector<double>> lhs = eq_lhs;
  std::vector<double> rhs(eq_rhs.begin(), eq_rhs.end());
  lhs.emplace_back(objective.begin(), objective.end());
  rhs.push_back(best.value);
  for (int i = 0; i < n; ++i) {
    std::vector<double> neg(n, 0.0);
    neg[i] = -1.0;
    SimplexResult step = solve_once(neg, lhs, rhs);
    if (!step.optimal()) break;  // numerical slack exhausted; keep best
    best.x = step.x;
    std::vector<double> pin(n, 0.0);
    pin[i] = 1.0;
    lhs.push_back(std::move(pin));
    rhs.push_back(step.x[i]);
  }
  best.value = 0.0;
  for (int j = 0; j < n; ++j) best.value += objective[j] * best.x[j];
  return best;
}

}  // namespace negotiation
