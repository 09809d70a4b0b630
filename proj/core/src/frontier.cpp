#include "negotiation/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace negotiation {

OutcomePoint outcome_point(const Scenario& scenario, const Offer& kept_by_a) {
  const int m = scenario.issues();
  if (static_cast<int>(kept_by_a.size()) != m)
    throw std::invalid_argument("outcome_point: offer arity mismatch");
  OutcomePoint p;
  for (int j = 0; j < m; ++j) {
    p.u_a += scenario.weights_a[j] * kept_by_a[j];
    p.u_b += scenario.weights_b[j] * (1.0 - kept_by_a[j]);
  }
  return p;
}

Frontier pareto_frontier(const Scenario& scenario) {
  scenario.validate();
  const int m = scenario.issues();
  if (m > 20) throw std::invalid_argument("pareto_frontier: too many issues");

  struct Labeled {
    OutcomePoint p;
    Offer offer;
  };
  std::vector<Labeled> pts;
  pts.reserve(std::size_t{1} << m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<double> x(m);
    for (int j = 0; j < m; ++j) x[j] = (mask >> j) & 1 ? 1.0 : 0.0;
    Offer o(std::move(x));
    pts.push_back({outcome_point(scenario, o), std::move(o)});
  }
  std::sort(pts.begin(), pts.end(), [](const Labeled& l, const Labeled& r) {
    if (l.p.u_a != r.p.u_a) return l.p.u_a < r.p.u_a;
    if (l.p.u_b != r.p.u_b) return l.p.u_b > r.p.u_b;
    return l.offer.shares < r.offer.shares;
  });

  // Upper hull, monotone chain; collinear middle points are dropped.
  auto cross = [](const OutcomePoint& o, const OutcomePoint& a,
                  const OutcomePoint& b) {
    return (a.u_a - o.u_a) * (b.u_b - o.u_b) -
           (a.u_b - o.u_b) * (b.u_a - o.u_a);
  };
  std::vector<int> hull;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (!hull.empty() && pts[hull.back()].p.u_a == pts[i].p.u_a) continue;
    while (hull.size() >= 2 &&
           cross(pts[hull[hull.size() - 2]].p, pts[hull.back()].p,
                 pts[i].p) >= 0.0)
      hull.pop_back();
    hull.push_back(i);
  }
  // Keep only the strictly decreasing-u_b (Pareto) part.
  std::size_t start = 0;
  while (start + 1 < hull.size() &&
         pts[hull[start + 1]].p.u_b >= pts[hull[start]].p.u_b)
    ++start;
  hull.erase(hull.begin(), hull.begin() + start);

  Frontier f;
  for (int idx : hull) {
    f.points.push_back(pts[idx].p);
    f.vertices.push_back(pts[idx].offer);
  }
  for (std::size_t i = 0; i + 1 < f.points.size(); ++i) {
    const OutcomePoint& p = f.points[i];
    const OutcomePoint& q = f.points[i + 1];
    FrontierSegment s;
    s.a = -(q.u_b - p.u_b) / (q.u_a - p.u_a);
    s.b = 1.0;
    s.c = -(s.a * p.u_a) - p.u_b;
    s.u_a_min = p.u_a;
    s.u_a_max = q.u_a;
    f.segments.push_back(s);
  }
  return f;
}

double frontier_distance(const Frontier& frontier, const OutcomePoint& p) {
  if (frontier.segments.empty())
    throw std::invalid_argument("frontier_distance: no segments");
  double best = std::numeric_limits<double>::infinity();
  for (const FrontierSegment& s : frontier.segments) {
    const double d = std::abs(s.a * p.u_a + s.b * p.u_b + s.c) /
                     std::sqrt(s.a * s.a + s.b * s.b);
    best = std::min(best, d);
  }
  return best;
}

double bid_distribution(const Frontier& frontier,
                        std::span<const OutcomePoint> points) {
  if (points.empty())
    throw std::invalid_argument("bid_distribution: no points");
  double sum = 0.0;
  for (const OutcomePoint& p : points) sum += frontier_distance(frontier, p);
  return sum / points.size();
}

double nash_product(const OutcomePoint& p) { return p.u_a * p.u_b; }

NashSolution nash_solution(const Scenario& scenario, double step) {
  scenario.validate();
  if (!(step > 0.0 && step <= 1.0))
    throw std::invalid_argument("nash_solution: step must lie in (0, 1]");
  const int m = scenario.issues();
  const int n = static_cast<int>(std::lround(1.0 / step));

  NashSolution best;
  best.product = -1.0;
  std::vector<int> idx(m, 0);
  std::vector<double> x(m, 0.0);
  for (;;) {
    for (int j = 0; j < m; ++j) x[j] = static_cast<double>(idx[j]) / n;
    Offer o(x);
    const OutcomePoint p = outcome_point(scenario, o);
    const double prod = nash_product(p);
    if (prod > best.product) {
      best.product = prod;
      best.outcome = p;
      best.offer = o;
    }
    int j = m - 1;
    while (j >= 0 && idx[j] == n) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  return best;
}

double mean_nash_distance(std::span<const OutcomePoint> points,
                          const OutcomePoint& reference) {
  if (points.empty())
    throw std::invalid_argument("mean_nash_distance: no points");
  double sum = 0.0;
  for (const OutcomePoint& p : points)
    sum += std::hypot(p.u_a - reference.u_a, p.u_b - reference.u_b);
  return sum / points.size();
}

}  // namespace negotiation
