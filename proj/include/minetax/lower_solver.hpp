#ifndef MINETAX_LOWER_SOLVER_HPP
#define MINETAX_LOWER_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "minetax/model.hpp"

namespace minetax {

/// A follower response together with its profit and whether the lower
/// level was solved to the stationarity contract.
struct BestResponse {
    FollowerResponse response;
    double profit = 0.0;
    bool optimality_tag = false;
};

struct LocalSearchOptions {
    double move_tolerance = 1e-7;     // converged once no accepted move exceeds this
    double line_tolerance = 1e-10;    // golden-section bracket width
    int max_sweeps = 2000;
    double stationarity_tolerance = 1e-4;
    double fd_step = 1e-6;
    // Line searches along e_i - e_j keep total extraction fixed and let the
    // search leave points where the cumulative cost kink blocks every
    // single-coordinate move.
    bool transfer_moves = true;
};

/// Maximizes a concave f over [lo, hi] by golden-section search. The
/// endpoints are compared against the final bracket so that boundary
/// optima are returned exactly.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tolerance);

struct AscentResult {
    std::vector<double> q;
    double profit = 0.0;
    int sweeps = 0;
    bool converged = false;
};

/// Cyclic coordinate ascent on the total profit for fixed taxes and
/// technology, starting from `start` (clamped into the q bounds).
AscentResult coordinate_ascent(std::span<const double> tau, const TechParams& tech, const ExtendedModel& model,
                               std::span<const double> start, const LocalSearchOptions& opts = {});

/// One-sided finite-difference test: no feasible coordinate direction (and,
/// when enabled, no pairwise transfer direction) increases profit faster
/// than the tolerance.
bool is_stationary(std::span<const double> q, std::span<const double> tau, const TechParams& tech,
                   const ExtendedModel& model, const LocalSearchOptions& opts = {});

BestResponse best_response_fixed_tech(const LeaderStrategy& strat, const TechParams& tech,
                                      const ExtendedModel& model, const LocalSearchOptions& opts = {});

/// Picks the better of two follower-optimal candidates. Profits equal up to
/// 1e-9 (absolute or relative) are broken in the leader's favour: a response
/// whose (revenue, damage) dominates wins, then higher revenue, then lower
/// damage, then the lower technology id.
bool prefer_response(const BestResponse& a, const BestResponse& b, const LeaderStrategy& strat,
                     const ExtendedModel& model);

/// Best response over all technologies, or only `tech_filter` when set.
BestResponse best_response(const LeaderStrategy& strat, const ExtendedModel& model,
                           std::optional<int> tech_filter = std::nullopt, const LocalSearchOptions& opts = {});

/// Settings of the evolutionary lower-level search.
struct LowerEaConfig {
    int population_size = 20;
    int generations = 30;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // negative: 1 / periods
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    std::uint64_t seed = 1;
    bool local_search = true;
    std::optional<std::vector<double>> start;  // injected as the first individual

    bool operator==(const LowerEaConfig&) const = default;
};

/// Real-coded GA over extraction schedules for each admissible technology,
/// followed by coordinate ascent from the best individual.
BestResponse best_response_ea(const LeaderStrategy& strat, const ExtendedModel& model, const LowerEaConfig& cfg,
                              std::optional<int> tech_filter = std::nullopt, const LocalSearchOptions& opts = {});

}  // namespace minetax

#endif
