#ifndef MINETAX_ORACLE_HPP
#define MINETAX_ORACLE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "minetax/lower_solver.hpp"
#include "minetax/model.hpp"
#include "minetax/pareto.hpp"

// Brute-force verifiers. They share only the cost primitives of the model
// with the production code and never call the coordinate-ascent solver.
namespace minetax::oracle {

struct GridSpec {
    std::vector<Bounds> bounds;
    double step = 1.0;
    std::size_t evaluation_cap = 100'000'000;

    void validate() const;
    std::size_t points(std::size_t dim) const;
    /// Product of the per-dimension point counts.
    double size() const;
};

/// Profit summed period by period straight from the definition.
double direct_profit(std::span<const double> q, std::span<const double> tau, const TechParams& tech,
                     const ExtendedModel& model);

/// Grid over [0, u_t] per period where u_t bounds every technology's optimal
/// extraction: marginal profit of q_t is at most
/// alpha_t - tau_t - beta_er - min slope - 2 (beta_t + alpha_er) q_t.
GridSpec response_grid(const LeaderStrategy& strat, const ExtendedModel& model, std::size_t points_per_dim);

/// Same bounds with the finest uniform step for which all technologies
/// together need at most `max_evaluations` grid points.
GridSpec response_grid_within(const LeaderStrategy& strat, const ExtendedModel& model, double max_evaluations);

/// Pattern search over +-e_i and +-(e_i - e_j) with a halving step, started
/// at `q`. Stays inside the model's extraction bounds.
std::vector<double> compass_refine(std::span<const double> q, std::span<const double> tau, const TechParams& tech,
                                   const ExtendedModel& model, double initial_step, double final_step = 1e-10);

/// Exhaustive grid over schedules for every technology; with `refine`, the
/// best grid point of each technology is polished by compass_refine before
/// the technologies are compared. Grids above the evaluation cap are
/// refused with DomainError.
BestResponse grid_best_response(const LeaderStrategy& strat, const ExtendedModel& model, const GridSpec& grid,
                                bool refine = true);

struct ScalarCheck {
    double tau = 0.0;
    double q = 0.0;
    double value = 0.0;
};

/// Maximizes w tau q(tau) - (1 - w) k q(tau) over a one-dimensional tax
/// grid; the first maximizer wins ties.
ScalarCheck weighted_scalar_check(const AnalyticalParams& p, double w, const GridSpec& grid);

/// Exact leader frontier when the technology is fixed and r = 0. For total
/// extraction Q in stratum m the follower's first-order conditions read
/// tau_t = alpha_t - beta_er - S^m - 2 (beta_t + alpha_er) q_t, so the best
/// revenue for that Q is a concave allocation problem solved by
/// water-filling. Samples Q uniformly up to the revenue peak (plus every
/// breakpoint) and returns the nondominated points.
std::vector<ObjectivePoint> technology_frontier(const ExtendedModel& model, int tech_id, std::size_t samples);

}  // namespace minetax::oracle

#endif
