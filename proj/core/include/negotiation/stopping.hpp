#ifndef NEGOTIATION_STOPPING_HPP_
#define NEGOTIATION_STOPPING_HPP_

#include <span>
#include <vector>

namespace negotiation {

// Value of stopping at time t against a time-based opponent with concession
// c under discount d and horizon T: (t/T)^(1/c) * d^t.
double own_utility(double c, double d, double T, double t);

// d/dt of own_utility: (t^(1/c) d^t / T^(1/c)) * (1/(c t) + ln d).
double own_marginal_utility(double c, double d, double T, double t);

// Opponent's marginal decision utility with reservation probability P_res:
// -(1 - P_res) / (c T^(1/c)) * t^((1-c)/c). Throws on the t = 0, c > 1
// singularity.
double opponent_marginal_utility(double c, double T, double p_reserve,
                                 double t);

// Stationary point -1 / (c ln d), capped at T (d >= 1 has no interior
// stationary point and returns T).
double optimal_stopping_time(double c, double d, double T);

// Second time derivative of own_utility:
// (d^t / T^(1/c)) * ((ln d)^2 t^(1/c) + (2 ln d / c) t^((1-c)/c)
//                   + ((1-c)/c^2) t^((1-2c)/c)).
double second_time_derivative(double c, double d, double T, double t);

// n-th time derivative of own_utility:
// (d^t / T^(1/c)) * sum_{i=0}^{n} C(n,i) (ln d)^(n-i) (1/c^i)
//                   prod_{j=1}^{i} (1 - (j-1) c) * t^((1-ic)/c).
double nth_time_derivative(double c, double d, double T, int n, double t);

// P_cum(t) = P_t(accept) * prod_{i<t} (1 - P_i(accept)), indexed from 0.
std::vector<double> cumulative_accept_probabilities(
    std::span<const double> p_accept);

// Inverts the time-based decision utility into a concession rate:
// c = ln(t/T) / ln(u_d).
double concession_from_decision_utility(double t, double T, double u_d);

}  // namespace negotiation

#endif  // NEGOTIATION_STOPPING_HPP_
