#ifndef NEGOTIATION_FRONTIER_HPP_
#define NEGOTIATION_FRONTIER_HPP_

#include <span>
#include <vector>

#include "negotiation/scenario.hpp"

namespace negotiation {

// Undiscounted outcome of an offer held by side A: (w_a . x, w_b . (1 - x)).
struct OutcomePoint {
  double u_a = 0.0;
  double u_b = 0.0;
};

OutcomePoint outcome_point(const Scenario& scenario, const Offer& kept_by_a);

// Line a * u_a + b * u_b + c = 0 (normalized to b = 1), valid on
// [u_a_min, u_a_max].
struct FrontierSegment {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double u_a_min = 0.0;
  double u_a_max = 0.0;
};

struct Frontier {
  std::vector<FrontierSegment> segments;
  std::vector<OutcomePoint> points;   // hull points, u_a ascending
  std::vector<Offer> vertices;        // cube vertex attaining each point
};

// Enumerates the 2^m cube vertices and takes the upper-right concave hull
// of their outcome points. m is capped at 20.
Frontier pareto_frontier(const Scenario& scenario);

// Minimum over segments of the point-to-line distance
// |a x + b y + c| / sqrt(a^2 + b^2).
double frontier_distance(const Frontier& frontier, const OutcomePoint& p);

// Mean frontier distance over a set of outcome points.
double bid_distribution(const Frontier& frontier,
                        std::span<const OutcomePoint> points);

double nash_product(const OutcomePoint& p);

struct NashSolution {
  Offer offer;
  OutcomePoint outcome;
  double product = 0.0;
};

// Grid search over offers in [0,1]^m with the given step (grid points are
// i/round(1/step)); first maximizer of the Nash product wins.
NashSolution nash_solution(const Scenario& scenario, double step = 0.01);

// Mean Euclidean distance of outcome points to a reference outcome.
double mean_nash_distance(std::span<const OutcomePoint> points,
                          const OutcomePoint& reference);

}  // namespace negotiation

#endif  // NEGOTIATION_FRONTIER_HPP_
