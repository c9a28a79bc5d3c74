#include "minetax/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "minetax/analytical.hpp"
#include "minetax/lower_solver.hpp"
#include "minetax/oracle.hpp"
#include "minetax/variation.hpp"

namespace minetax::verify {
namespace {

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finish(CheckResult& r, bool ok, const Stopwatch& sw) {
    r.seconds = sw.seconds();
    r.passed = ok && (r.time_limit <= 0.0 || r.seconds < r.time_limit);
}

// Distance from p to segment [a, b] in the plane.
double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    const double dx = bx - ax;
    const double dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    const double s = len2 > 0.0 ? std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0) : 0.0;
    return std::hypot(px - ax - s * dx, py - ay - s * dy);
}

}  // namespace

CheckResult closed_form(const AnalyticalParams& p, std::span<const double> weights, double fd_step,
                        double derivative_tol, double grid_step, double time_limit) {
    Stopwatch sw;
    CheckResult r{"closed-form optimality conditions", false, 0.0, derivative_tol, 0.0, time_limit, {}};
    double worst_grid = 0.0;
    oracle::GridSpec grid{{{0.0, p.alpha - p.gamma}}, grid_step};
    for (double w : weights) {
        const double tau = analytical::optimal_tax(w, p);
        const double q = analytical::optimal_extraction(w, p);
        const double follower = (analytical::follower_profit(q + fd_step, tau, p) -
                                 analytical::follower_profit(q - fd_step, tau, p)) / (2.0 * fd_step);
        const double leader = (analytical::scalarized_objective(tau + fd_step, w, p) -
                               analytical::scalarized_objective(tau - fd_step, w, p)) / (2.0 * fd_step);
        r.measured = std::max({r.measured, std::abs(follower), std::abs(leader)});
        const auto best = oracle::weighted_scalar_check(p, w, grid);
        worst_grid = std::max({worst_grid, std::abs(best.tau - tau), std::abs(best.q - q)});
    }
    std::ostringstream d;
    d << weights.size() << " weights, largest tax/extraction gap to grid oracle " << worst_grid << " (step " << grid_step << ")";
    r.detail = d.str();
    finish(r, r.measured <= derivative_tol && worst_grid <= grid_step, sw);
    return r;
}

CheckResult threshold(const AnalyticalParams& p, double expected, double tol) {
    Stopwatch sw;
    CheckResult r{"feasibility threshold", false, 0.0, tol, 0.0, 0.0, {}};
    const double w = analytical::feasibility_threshold(p);
    const double raw_q = (w * (p.alpha - p.gamma) - (1.0 - w) * p.k) / (4.0 * w * (p.beta + p.delta));
    r.measured = std::max(std::abs(w - expected), std::abs(raw_q));
    std::ostringstream d;
    d.precision(15);
    d << "w_min = " << w << ", expected " << expected << ", extraction there " << raw_q;
    r.detail = d.str();
    finish(r, r.measured <= tol, sw);
    return r;
}

CheckResult endpoints(const AnalyticalParams& p, double revenue_w1, double damage_w1, double tol) {
    Stopwatch sw;
    CheckResult r{"frontier endpoints", false, 0.0, tol, 0.0, 0.0, {}};
    const auto sweep = analytical::pareto_sweep(p, 100);
    const auto& lo = sweep.front();
    const auto& hi = sweep.back();
    r.measured = std::max({std::abs(lo.revenue), std::abs(lo.damage), std::abs(hi.revenue - revenue_w1),
                           std::abs(hi.damage - damage_w1)});
    std::ostringstream d;
    d.precision(12);
    d << "w_min -> (" << lo.revenue << ", " << lo.damage << "), w = 1 -> (" << hi.revenue << ", " << hi.damage
      << ")";
    r.detail = d.str();
    finish(r, r.measured <= tol, sw);
    return r;
}

CheckResult analytical_ea(const AnalyticalParams& p, const EaConfig& cfg, double distance_tol, double min_spread,
                          double time_limit) {
    Stopwatch sw;
    CheckResult r{"bilevel EA on the single-period model", false, 0.0, distance_tol, 0.0, time_limit, {}};
    const auto result = evolve(embed_analytical(p), cfg);
    const auto sweep = analytical::pareto_sweep(p, 2001);
    const double rr = std::max(sweep.back().revenue - sweep.front().revenue, 1e-300);
    const double dr = std::max(sweep.back().damage - sweep.front().damage, 1e-300);
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -dmin;
    for (const auto& o : result.archive.objectives()) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < sweep.size(); ++i)
            best = std::min(best, segment_distance(o.damage / dr, o.revenue / rr, sweep[i].damage / dr,
                                                   sweep[i].revenue / rr, sweep[i + 1].damage / dr,
                                                   sweep[i + 1].revenue / rr));
        r.measured = std::max(r.measured, best);
        dmin = std::min(dmin, o.damage);
        dmax = std::max(dmax, o.damage);
    }
    const double spread = result.archive.empty() ? 0.0 : (dmax - dmin) / dr;
    std::ostringstream d;
    d << result.archive.size() << " archive points after " << result.generations << " generations, spread "
      << spread << " (min " << min_spread << ")";
    r.detail = d.str();
    finish(r, !result.archive.empty() && r.measured <= distance_tol && spread >= min_spread, sw);
    return r;
}

CheckResult oracle_equivalence(const ExtendedModel& model, std::size_t strategies, std::uint64_t seed, double tol,
                               double grid_evaluations, double time_limit) {
    Stopwatch sw;
    CheckResult r{"lower-level solver vs grid oracle", false, 0.0, tol, 0.0, time_limit, {}};
    Rng rng(seed);
    std::size_t untagged = 0;
    for (std::size_t s = 0; s < strategies; ++s) {
        LeaderStrategy strat;
        for (const auto& b : model.tau_bounds) strat.tau.push_back(b.lower + uniform01(rng) * (b.upper - b.lower));
        const BestResponse mine = best_response(strat, model);
        if (!mine.optimality_tag) ++untagged;
        const BestResponse ref = oracle::grid_best_response(strat, model, oracle::response_grid_within(strat, model, grid_evaluations));
        r.measured = std::max(r.measured, std::abs(mine.profit - ref.profit));
    }
    std::ostringstream d;
    d << strategies << " strategies, " << untagged << " untagged solves, grid of " << grid_evaluations
      << " evaluations per strategy";
    r.detail = d.str();
    finish(r, r.measured <= tol && untagged == 0, sw);
    return r;
}

CheckResult telescoping(const ExtendedModel& model, std::size_t schedules, std::uint64_t seed, double tol,
                        double time_limit) {
    Stopwatch sw;
    CheckResult r{"purification cost telescoping", false, 0.0, tol, 0.0, time_limit, {}};
    Rng rng(seed);
    const std::size_t T = model.periods();
    const double per_period = 1.5 * model.stock() / static_cast<double>(T);
    std::vector<double> q(T);
    for (std::size_t s = 0; s < schedules; ++s) {
        for (auto& x : q) x = uniform01(rng) * per_period;
        for (const auto& tech : model.techs) {
            double sum = 0.0;
            for (std::size_t t = 0; t < T; ++t) {
                const double gross = (model.alpha[t] - model.beta[t] * q[t]) * q[t] - extraction_rate_cost(q[t], tech);
                sum += gross - period_profit(t, std::span(q).first(t + 1), 0.0, tech, model);
            }
            double total = 0.0;
            for (double x : q) total += x;
            r.measured = std::max(r.measured, std::abs(sum - cumulative_cost(total, tech, model.strata)));
        }
    }
    std::ostringstream d;
    d << schedules << " schedules x " << model.techs.size() << " technologies";
    r.detail = d.str();
    finish(r, r.measured <= tol, sw);
    return r;
}

CheckResult convexity(const ExtendedModel& model, double tol) {
    Stopwatch sw;
    CheckResult r{"convexity of the purification cost", false, 0.0, tol, 0.0, 0.0, {}};
    std::ostringstream d;
    const double top = 1.5 * std::max(model.stock(), 1.0);
    constexpr int n = 150;
    for (const auto& tech : model.techs) {
        double worst = 0.0;
        for (std::size_t m = 0; m + 1 < tech.slopes.size(); ++m)
            worst = std::max(worst, tech.slopes[m] - tech.slopes[m + 1]);
        for (int i = 0; i <= n; ++i) {
            const double x = top * i / n;
            for (int j = i + 1; j <= n; ++j) {
                const double y = top * j / n;
                const double mid = cumulative_cost(0.5 * (x + y), tech, model.strata);
                const double chord = 0.5 * (cumulative_cost(x, tech, model.strata) + cumulative_cost(y, tech, model.strata));
                worst = std::max(worst, mid - chord);
            }
        }
        if (worst > tol) d << "technology " << tech.id << " violates convexity by " << worst << "; ";
        r.measured = std::max(r.measured, worst);
    }
    r.detail = d.str().empty() ? std::to_string(model.techs.size()) + " technologies convex" : d.str();
    finish(r, r.measured <= tol, sw);
    return r;
}

FrontierStudy frontier_study(const ExtendedModel& model, const EaConfig& per_tech, const EaConfig& all) {
    Stopwatch sw;
    FrontierStudy study;
    for (const auto& tech : model.techs) {
        EaConfig cfg = per_tech;
        cfg.seed = per_tech.seed + static_cast<std::uint64_t>(tech.id);
        study.per_tech.emplace(tech.id, evolve(model, cfg, tech.id));
    }
    study.all = evolve(model, all);
    study.seconds = sw.seconds();
    return study;
}

CheckResult composition(std::span<const ObjectivePoint> union_points, std::span<const ObjectivePoint> combined,
                        double tol) {
    Stopwatch sw;
    CheckResult r{"frontier composition", false, 0.0, tol, 0.0, 0.0, {}};
    const auto u = nondominated_filter(union_points);
    const auto c = nondominated_filter(combined);
    const ObjectiveScale scale = objective_scale({u, c});
    const double covers_combined = additive_epsilon(u, c, scale);
    const double covers_union = additive_epsilon(c, u, scale);
    r.measured = std::max(covers_combined, covers_union);
    std::ostringstream d;
    d << "eps(union -> combined) " << covers_combined << ", eps(combined -> union) " << covers_union << "; "
      << u.size() << " vs " << c.size() << " points";
    r.detail = d.str();
    finish(r, !u.empty() && !c.empty() && r.measured <= tol, sw);
    return r;
}

CheckResult composition(const FrontierStudy& study, double tol) {
    std::vector<ObjectivePoint> u;
    for (const auto& [id, res] : study.per_tech)
        for (const auto& p : res.archive.objectives()) u.push_back(p);
    CheckResult r = composition(u, study.all.archive.objectives(), tol);
    std::map<int, std::size_t> counts;
    for (const auto& e : study.all.archive.entries()) ++counts[e.response.tech_id];
    r.detail += "; combined archive by technology:";
    for (const auto& [id, n] : counts) r.detail += " " + std::to_string(id) + ":" + std::to_string(n);
    r.seconds = study.seconds;
    return r;
}

CheckResult strata_kinks(const FrontierStudy& study, const ExtendedModel& model) {
    Stopwatch sw;
    CheckResult r{"strata kinks on single-technology frontiers", false, 0.0,
                  static_cast<double>(study.per_tech.size()), 0.0, 0.0, {}};
    std::ostringstream d;
    for (const auto& [id, res] : study.per_tech) {
        const auto kinks = detect_strata_kinks(res.archive.sorted_by_damage(), model);
        if (!kinks.empty()) r.measured += 1.0;
        d << "tech " << id << ":";
        if (kinks.empty()) d << " none";
        for (const auto& k : kinks) d << ' ' << k.breakpoint;
        d << "; ";
    }
    r.detail = d.str();
    finish(r, !study.per_tech.empty() && r.measured == r.tolerance, sw);
    return r;
}

CheckResult csv_reevaluation(std::span<const report::FrontierRow> rows, const ExtendedModel& model, double tol) {
    Stopwatch sw;
    CheckResult r{"frontier rows re-evaluate", false, 0.0, tol, 0.0, 0.0, {}};
    for (const auto& row : rows) r.measured = std::max(r.measured, report::reevaluation_error(row, model));
    r.detail = std::to_string(rows.size()) + " rows, relative to max(1, |value|)";
    finish(r, r.measured <= tol, sw);
    return r;
}

CheckResult identical(const std::string& name, const std::string& a, const std::string& b) {
    Stopwatch sw;
    CheckResult r{name, false, a == b ? 0.0 : 1.0, 0.0, 0.0, 0.0, {}};
    r.detail = std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " bytes";
    finish(r, a == b, sw);
    return r;
}

}  // namespace minetax::verify
