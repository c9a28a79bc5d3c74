#include "minetax/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "minetax/analytical.hpp"

namespace minetax::oracle {

void GridSpec::validate() const {
    if (bounds.empty()) throw DomainError("grid needs at least one dimension");
    if (!(step > 0.0)) throw DomainError("grid step must be > 0");
    for (const auto& b : bounds)
        if (!(b.lower <= b.upper)) throw DomainError("grid bounds must be ordered");
}

std::size_t GridSpec::points(std::size_t dim) const {
    const auto& b = bounds.at(dim);
    return static_cast<std::size_t>(std::floor((b.upper - b.lower) / step + 1e-9)) + 1;
}

double GridSpec::size() const {
    double n = 1.0;
    for (std::size_t d = 0; d < bounds.size(); ++d) n *= static_cast<double>(points(d));
    return n;
}

double direct_profit(std::span<const double> q, std::span<const double> tau, const TechParams& tech,
                     const ExtendedModel& model) {
    double total = 0.0;
    double cum = 0.0;
    for (std::size_t t = 0; t < q.size(); ++t) {
        const double price = model.alpha[t] - model.beta[t] * q[t];
        const double purification = cumulative_cost(cum + q[t], tech, model.strata) - cumulative_cost(cum, tech, model.strata);
        const double pi = price * q[t] - extraction_rate_cost(q[t], tech) - purification - tau[t] * q[t];
        total += std::pow(1.0 + model.discount_rate, -static_cast<double>(t)) * pi;
        cum += q[t];
    }
    return total;
}

GridSpec response_grid(const LeaderStrategy& strat, const ExtendedModel& model, std::size_t points_per_dim) {
    if (points_per_dim < 2) throw DomainError("response_grid: need at least two points per dimension");
    GridSpec grid;
    double widest = 0.0;
    for (std::size_t t = 0; t < model.periods(); ++t) {
        double upper = 0.0;
        for (const auto& tech : model.techs) {
            const double min_slope = *std::min_element(tech.slopes.begin(), tech.slopes.end());
            const double margin = model.alpha[t] - strat.tau[t] - tech.beta_er - min_slope;
            upper = std::max(upper, margin / (2.0 * (model.beta[t] + tech.alpha_er)));
        }
        upper = std::clamp(upper, model.q_bounds[t].lower, model.q_bounds[t].upper);
        grid.bounds.push_back({model.q_bounds[t].lower, upper});
        widest = std::max(widest, upper - model.q_bounds[t].lower);
    }
    grid.step = widest > 0.0 ? widest / static_cast<double>(points_per_dim - 1) : 1.0;
    return grid;
}

GridSpec response_grid_within(const LeaderStrategy& strat, const ExtendedModel& model, double max_evaluations) {
    GridSpec grid = response_grid(strat, model, 2);
    const double techs = static_cast<double>(model.techs.size());
    if (grid.size() * techs > max_evaluations) throw DomainError("response_grid_within: budget below the coarsest grid");
    // Smallest step whose grid fits the budget; the count is monotone in the step.
    double hi = grid.step;
    double lo = hi * 1e-9;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        grid.step = mid;
        (grid.size() * techs <= max_evaluations ? hi : lo) = mid;
    }
    grid.step = hi;
    grid.evaluation_cap = static_cast<std::size_t>(max_evaluations);
    return grid;
}

std::vector<double> compass_refine(std::span<const double> q0, std::span<const double> tau, const TechParams& tech,
                                   const ExtendedModel& model, double initial_step, double final_step) {
    const std::size_t T = q0.size();
    std::vector<double> q(q0.begin(), q0.end());
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < T; ++i) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> d(T, 0.0);
            d[i] = s;
            dirs.push_back(d);
        }
        for (std::size_t j = 0; j < T; ++j) {
            if (i == j) continue;
            std::vector<double> d(T, 0.0);
            d[i] = 1.0;
            d[j] = -1.0;
            dirs.push_back(d);
        }
    }
    double f = direct_profit(q, tau, tech, model);
    std::vector<double> trial(T);
    for (double step = initial_step; step >= final_step; step *= 0.5) {
        bool improved = true;
        while (improved) {
            improved = false;
            for (const auto& d : dirs) {
                for (std::size_t t = 0; t < T; ++t)
                    trial[t] = std::clamp(q[t] + step * d[t], model.q_bounds[t].lower, model.q_bounds[t].upper);
                const double ft = direct_profit(trial, tau, tech, model);
                if (ft > f + 1e-15 * (1.0 + std::abs(f))) {
                    q = trial;
                    f = ft;
                    improved = true;
                }
            }
        }
    }
    return q;
}

BestResponse grid_best_response(const LeaderStrategy& strat, const ExtendedModel& model, const GridSpec& grid,
                                bool refine) {
    grid.validate();
    const std::size_t T = model.periods();
    if (grid.bounds.size() != T) throw DomainError("grid dimension must equal the number of periods");
    if (strat.tau.size() != T) throw DomainError("strategy length must equal the number of periods");
    const double evaluations = grid.size() * static_cast<double>(model.techs.size());
    if (evaluations > static_cast<double>(grid.evaluation_cap))
        throw DomainError("grid of " + std::to_string(evaluations) + " evaluations exceeds the cap of " +
                          std::to_string(grid.evaluation_cap));

    std::vector<std::vector<double>> values(T);
    for (std::size_t t = 0; t < T; ++t)
        for (std::size_t k = 0; k < grid.points(t); ++k)
            values[t].push_back(grid.bounds[t].lower + static_cast<double>(k) * grid.step);

    std::optional<BestResponse> best;
    for (const auto& tech : model.techs) {
        // Precomputed per-period terms that do not depend on other periods.
        std::vector<std::vector<double>> own(T);
        for (std::size_t t = 0; t < T; ++t)
            for (double x : values[t])
                own[t].push_back((model.alpha[t] - model.beta[t] * x) * x - extraction_rate_cost(x, tech) - strat.tau[t] * x);

        std::vector<double> current(T, 0.0);
        std::vector<double> argmax(T, 0.0);
        double best_value = -std::numeric_limits<double>::infinity();
        std::function<void(std::size_t, double, double)> descend = [&](std::size_t t, double cum, double partial) {
            if (t == T) {
                if (partial > best_value) {
                    best_value = partial;
                    argmax = current;
                }
                return;
            }
            const double d = std::pow(1.0 + model.discount_rate, -static_cast<double>(t));
            const double before = cumulative_cost(cum, tech, model.strata);
            for (std::size_t k = 0; k < values[t].size(); ++k) {
                const double x = values[t][k];
                current[t] = x;
                const double purification = cumulative_cost(cum + x, tech, model.strata) - before;
                descend(t + 1, cum + x, partial + d * (own[t][k] - purification));
            }
        };
        descend(0, 0.0, 0.0);

        BestResponse cand;
        cand.response = {argmax, tech.id};
        if (refine) cand.response.q = compass_refine(argmax, strat.tau, tech, model, grid.step);
        cand.profit = direct_profit(cand.response.q, strat.tau, tech, model);
        cand.optimality_tag = true;
        if (!best || cand.profit > best->profit) best = std::move(cand);
    }
    return *best;
}

ScalarCheck weighted_scalar_check(const AnalyticalParams& p, double w, const GridSpec& grid) {
    if (!(w > 0.0 && w <= 1.0)) throw DomainError("weight must lie in (0, 1]");
    grid.validate();
    if (grid.bounds.size() != 1) throw DomainError("tax grid must be one-dimensional");
    const std::size_t n = grid.points(0);
    if (static_cast<double>(n) > static_cast<double>(grid.evaluation_cap)) throw DomainError("tax grid exceeds the cap");
    ScalarCheck best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = grid.bounds[0].lower + static_cast<double>(i) * grid.step;
        const double q = analytical::follower_best_response(tau, p);
        const double value = w * tau * q - (1.0 - w) * p.k * q;
        if (value > best.value) best = {tau, q, value};
    }
    return best;
}

namespace {

struct Allocation {
    double revenue = 0.0;
    bool feasible = true;
};

// max sum q_t (A_t - 2 b_t q_t) subject to sum q_t = Q, q_t >= 0.
Allocation allocate(double Q, std::span<const double> A, std::span<const double> b) {
    auto total_at = [&](double mu) {
        double s = 0.0;
        for (std::size_t t = 0; t < A.size(); ++t) s += std::max(0.0, (A[t] - mu) / (4.0 * b[t]));
        return s;
    };
    double hi = *std::max_element(A.begin(), A.end());
    double lo = hi - 1.0;
    while (total_at(lo) < Q) lo -= 2.0 * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total_at(mid) > Q ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    Allocation out;
    for (std::size_t t = 0; t < A.size(); ++t) {
        const double q = std::max(0.0, (A[t] - mu) / (4.0 * b[t]));
        const double tau = A[t] - 2.0 * b[t] * q;
        if (q > 0.0 && tau < 0.0) out.feasible = false;
        out.revenue += q * tau;
    }
    return out;
}

}  // namespace

std::vector<ObjectivePoint> technology_frontier(const ExtendedModel& model, int tech_id, std::size_t samples) {
    if (model.discount_rate != 0.0) throw DomainError("technology_frontier: only defined for r = 0");
    if (samples < 2) throw DomainError("technology_frontier: need at least two samples");
    const TechParams& tech = model.tech(tech_id);
    const std::size_t T = model.periods();
    std::vector<double> b(T);
    for (std::size_t t = 0; t < T; ++t) b[t] = model.beta[t] + tech.alpha_er;

    auto point = [&](double Q) -> std::optional<ObjectivePoint> {
        const double lambda = tech.slopes[model.strata.stratum_of(Q)];
        std::vector<double> A(T);
        for (std::size_t t = 0; t < T; ++t) A[t] = model.alpha[t] - tech.beta_er - lambda;
        if (Q == 0.0) return ObjectivePoint{0.0, 0.0, 0.0};
        const Allocation alloc = allocate(Q, A, b);
        if (!alloc.feasible) return std::nullopt;
        return ObjectivePoint{alloc.revenue, tech.k * Q, 0.0};
    };

    // Revenue peaks where the water level reaches zero in the last
    // stratum reached; extraction beyond the unconstrained peak of the
    // cheapest slope can never be on the frontier.
    double q_peak = 0.0;
    for (std::size_t t = 0; t < T; ++t)
        q_peak += std::max(0.0, (model.alpha[t] - tech.beta_er - tech.slopes.front()) / (4.0 * b[t]));

    std::vector<ObjectivePoint> pts;
    for (std::size_t i = 0; i < samples; ++i) {
        const double Q = q_peak * static_cast<double>(i) / static_cast<double>(samples - 1);
        if (auto p = point(Q)) pts.push_back(*p);
    }
    for (double bp : model.strata.breakpoints())
        if (bp <= q_peak)
            if (auto p = point(bp)) pts.push_back(*p);
    return nondominated_filter(pts);
}

}  // namespace minetax::oracle
