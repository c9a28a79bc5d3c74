#include "minetax/analytical.hpp"

#include <algorithm>

namespace minetax::analytical {

namespace {

void check_weight(double w) {
    if (!(w > 0.0 && w <= 1.0)) throw DomainError("weight must lie in (0, 1]");
}

}  // namespace

double follower_profit(double q, double tau, const AnalyticalParams& p) {
    return (p.alpha - p.beta * q) * q - (p.delta * q * q + p.gamma * q + p.phi) - tau * q;
}

double scalarized_objective(double tau, double w, const AnalyticalParams& p) {
    const double q = follower_best_response(tau, p);
    return w * tau * q - (1.0 - w) * p.k * q;
}

double follower_best_response(double tau, const AnalyticalParams& p) {
    if (!(tau >= 0.0)) throw DomainError("follower_best_response: tax must be >= 0");
    return std::max(0.0, (p.alpha - p.gamma - tau) / (2.0 * (p.beta + p.delta)));
}

double optimal_tax(double w, const AnalyticalParams& p) {
    check_weight(w);
    return (p.alpha - p.gamma - p.k) / 2.0 + p.k / (2.0 * w);
}

double optimal_extraction(double w, const AnalyticalParams& p) {
    check_weight(w);
    const double q = (w * (p.alpha - p.gamma) - (1.0 - w) * p.k) / (4.0 * w * (p.beta + p.delta));
    return std::max(0.0, q);
}

double feasibility_threshold(const AnalyticalParams& p) {
    if (!(p.alpha > p.gamma)) throw DomainError("feasibility_threshold: alpha must exceed gamma");
    return p.k / (p.alpha - p.gamma + p.k);
}

WeightedSolution solve_weighted(double w, const AnalyticalParams& p) {
    WeightedSolution s;
    s.w = w;
    s.tau_star = optimal_tax(w, p);
    s.q_star = optimal_extraction(w, p);
    s.revenue = s.tau_star * s.q_star;
    s.damage = p.k * s.q_star;
    s.profit = follower_profit(s.q_star, s.tau_star, p);
    return s;
}

std::vector<WeightedSolution> pareto_sweep(const AnalyticalParams& p, std::size_t n_points) {
    if (n_points < 2) throw DomainError("pareto_sweep: need at least two points");
    const double w_min = feasibility_threshold(p);
    std::vector<WeightedSolution> out;
    out.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        // Pin both ends so the endpoints are exact.
        double w = i + 1 == n_points ? 1.0
                                     : w_min + (1.0 - w_min) * static_cast<double>(i) /
                                                   static_cast<double>(n_points - 1);
        if (w <= 0.0) w = 1.0 / static_cast<double>(4 * n_points);  // k = 0 puts w_min at zero
        out.push_back(solve_weighted(w, p));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const WeightedSolution& a, const WeightedSolution& b) { return a.damage < b.damage; });
    return out;
}

}  // namespace minetax::analytical
