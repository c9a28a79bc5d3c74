#ifndef MINETAX_ANALYTICAL_HPP
#define MINETAX_ANALYTICAL_HPP

#include <cstddef>
#include <vector>

#include "minetax/model.hpp"

namespace minetax::analytical {

/// One point of the weighted-sum frontier of the single-period game.
struct WeightedSolution {
    double w = 1.0;
    double tau_star = 0.0;
    double q_star = 0.0;
    double revenue = 0.0;
    double damage = 0.0;
    double profit = 0.0;
};

/// Mine profit (alpha - beta q) q - (delta q^2 + gamma q + phi) - tau q.
double follower_profit(double q, double tau, const AnalyticalParams& p);

/// w tau q(tau) - (1 - w) k q(tau) with q the follower's best response.
double scalarized_objective(double tau, double w, const AnalyticalParams& p);

/// max(0, (alpha - gamma - tau) / (2 (beta + delta))).
double follower_best_response(double tau, const AnalyticalParams& p);

/// (alpha - gamma - k) / 2 + k / (2 w), for 0 < w <= 1.
double optimal_tax(double w, const AnalyticalParams& p);

/// [w (alpha - gamma) - (1 - w) k] / (4 w (beta + delta)), clamped at zero.
double optimal_extraction(double w, const AnalyticalParams& p);

/// Weight below which the optimal extraction would turn negative:
/// k / (alpha - gamma + k).
double feasibility_threshold(const AnalyticalParams& p);

WeightedSolution solve_weighted(double w, const AnalyticalParams& p);

/// Closed-form frontier on a uniform weight grid over
/// [feasibility_threshold, 1], sorted by damage.
std::vector<WeightedSolution> pareto_sweep(const AnalyticalParams& p, std::size_t n_points);

}  // namespace minetax::analytical

#endif
