#ifndef MINETAX_VERIFY_HPP
#define MINETAX_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "minetax/bilevel.hpp"
#include "minetax/model.hpp"
#include "minetax/report.hpp"

// Numerical checks shared by the acceptance binary and `minetax --verify`.
// Each returns the measured deviation next to its tolerance.
namespace minetax::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    double time_limit = 0.0;  // 0: unlimited
    std::string detail;
};

/// First-order conditions of both levels at the closed-form optimum
/// (central differences with `fd_step`), and the tax grid oracle at
/// `grid_step`. Measured value: largest |derivative|; the tax and extraction
/// gaps to the grid argmax must stay within one step.
CheckResult closed_form(const AnalyticalParams& p, std::span<const double> weights, double fd_step = 1e-4,
                        double derivative_tol = 1e-6, double grid_step = 1e-3, double time_limit = 1.0);

/// feasibility_threshold equals `expected`, and the unclamped optimal
/// extraction vanishes there.
CheckResult threshold(const AnalyticalParams& p, double expected, double tol = 1e-12);

/// Sweep endpoints: (0, 0) at the threshold and the given pair at w = 1.
CheckResult endpoints(const AnalyticalParams& p, double revenue_w1, double damage_w1, double tol = 1e-9);

/// Nested EA on the one-period embedding against the closed-form frontier:
/// largest normalized distance of an archive point to the frontier polyline,
/// plus the covered share of the damage range.
CheckResult analytical_ea(const AnalyticalParams& p, const EaConfig& cfg, double distance_tol = 0.01,
                          double min_spread = 0.9, double time_limit = 120.0);

/// Deterministic best response against the grid-plus-compass oracle on
/// random strategies drawn uniformly inside the tax bounds. The oracle grid
/// is as fine as `grid_evaluations` allows.
CheckResult oracle_equivalence(const ExtendedModel& model, std::size_t strategies, std::uint64_t seed,
                               double tol = 1e-2, double grid_evaluations = 1e6, double time_limit = 300.0);

/// Per-period purification costs, read back out of period_profit, add up
/// to C(total extraction) for random schedules and every technology.
CheckResult telescoping(const ExtendedModel& model, std::size_t schedules, std::uint64_t seed, double tol = 1e-9,
                        double time_limit = 1.0);

/// Nondecreasing slopes and the midpoint inequality on a grid up to
/// 1.5 times the stock.
CheckResult convexity(const ExtendedModel& model, double tol = 1e-9);

struct FrontierStudy {
    std::map<int, EvolveResult> per_tech;
    EvolveResult all;
    double seconds = 0.0;
};

/// One run restricted to each technology (seed + id) and one run with
/// every technology available (seed).
FrontierStudy frontier_study(const ExtendedModel& model, const EaConfig& per_tech, const EaConfig& all);

/// Additive epsilon between the nondominated union of two-or-more
/// frontiers and a combined frontier, in both directions, on objectives
/// normalized by their joint range.
CheckResult composition(std::span<const ObjectivePoint> union_points, std::span<const ObjectivePoint> combined,
                        double tol = 0.005);
CheckResult composition(const FrontierStudy& study, double tol = 0.005);

/// Every single-technology frontier shows at least one strata kink.
CheckResult strata_kinks(const FrontierStudy& study, const ExtendedModel& model);

/// Recomputed objectives of every row agree with the stored ones.
CheckResult csv_reevaluation(std::span<const report::FrontierRow> rows, const ExtendedModel& model,
                             double tol = 1e-9);

CheckResult identical(const std::string& name, const std::string& a, const std::string& b);

}  // namespace minetax::verify

#endif
