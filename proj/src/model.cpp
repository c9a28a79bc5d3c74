#include "minetax/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace minetax {

namespace {

void require(bool condition, const std::string& what) {
    if (!condition) throw DomainError(what);
}

}  // namespace

void AnalyticalParams::validate() const {
    require(alpha > 0.0, "analytical.alpha must be > 0");
    require(beta > 0.0, "analytical.beta must be > 0");
    require(delta > 0.0, "analytical.delta must be > 0");
    require(gamma >= 0.0, "analytical.gamma must be >= 0");
    require(phi >= 0.0, "analytical.phi must be >= 0");
    require(k > 0.0, "analytical.k must be > 0");
    require(alpha > gamma, "analytical.alpha must exceed analytical.gamma");
}

void TechParams::validate() const {
    const std::string where = "technology " + std::to_string(id) + ": ";
    require(k > 0.0, where + "k must be > 0");
    require(alpha_er >= 0.0, where + "alpha_er must be >= 0");
    require(beta_er >= 0.0, where + "beta_er must be >= 0");
    require(gamma_er >= 0.0, where + "gamma_er must be >= 0");
    require(!slopes.empty(), where + "slopes must not be empty");
    for (double s : slopes) require(s >= 0.0 && std::isfinite(s), where + "slopes must be finite and >= 0");
}

StrataTable::StrataTable(std::vector<double> amounts) : amounts_(std::move(amounts)) {
    require(!amounts_.empty(), "strata must not be empty");
    breakpoints_.reserve(amounts_.size());
    double sum = 0.0;
    for (double a : amounts_) {
        require(a > 0.0 && std::isfinite(a), "strata amounts must be finite and > 0");
        sum += a;
        breakpoints_.push_back(sum);
    }
}

std::size_t StrataTable::stratum_of(double x) const {
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
    if (it == breakpoints_.end()) return breakpoints_.empty() ? 0 : breakpoints_.size() - 1;
    return static_cast<std::size_t>(it - breakpoints_.begin());
}

double ExtendedModel::discount(std::size_t t) const {
    if (discount_rate == 0.0) return 1.0;
    return std::pow(1.0 + discount_rate, -static_cast<double>(t));
}

bool ExtendedModel::has_tech(int id) const {
    return std::any_of(techs.begin(), techs.end(), [id](const TechParams& t) { return t.id == id; });
}

const TechParams& ExtendedModel::tech(int id) const {
    for (const auto& t : techs)
        if (t.id == id) return t;
    throw DomainError("unknown technology id " + std::to_string(id));
}

void ExtendedModel::fill_default_bounds() {
    if (tau_bounds.empty())
        for (double a : alpha) tau_bounds.push_back({0.0, a});
    if (q_bounds.empty())
        for (std::size_t t = 0; t < alpha.size() && t < beta.size(); ++t)
            q_bounds.push_back({0.0, alpha[t] / (2.0 * beta[t])});
}

void ExtendedModel::validate() const {
    const std::size_t T = periods();
    require(T >= 1, "extended.alpha must have at least one period");
    require(beta.size() == T, "extended.beta must have one entry per period");
    for (double b : beta) require(b > 0.0, "extended.beta entries must be > 0");
    for (double a : alpha) require(a > 0.0, "extended.alpha entries must be > 0");
    require(discount_rate >= 0.0, "extended.discount_rate must be >= 0");
    require(strata.size() >= 1, "extended.strata must not be empty");
    require(!techs.empty(), "extended.technologies must not be empty");
    std::set<int> ids;
    for (const auto& t : techs) {
        t.validate();
        require(ids.insert(t.id).second, "duplicate technology id " + std::to_string(t.id));
        require(t.slopes.size() == strata.size(),
                "technology " + std::to_string(t.id) + ": needs one slope per stratum");
    }
    require(tau_bounds.size() == T, "extended.tau_bounds must have one entry per period");
    require(q_bounds.size() == T, "extended.q_bounds must have one entry per period");
    for (const auto& b : tau_bounds)
        require(b.lower >= 0.0 && b.lower <= b.upper, "extended.tau_bounds must satisfy 0 <= lower <= upper");
    for (const auto& b : q_bounds)
        require(b.lower >= 0.0 && b.lower <= b.upper, "extended.q_bounds must satisfy 0 <= lower <= upper");
}

double cumulative_cost(double x, const TechParams& tech, const StrataTable& strata) {
    if (!(x >= 0.0)) throw DomainError("cumulative_cost: extraction must be >= 0");
    if (tech.slopes.size() != strata.size())
        throw DomainError("cumulative_cost: slope count does not match strata count");
    const auto& amounts = strata.amounts();
    double cost = 0.0;
    double remaining = x;
    for (std::size_t m = 0; m < amounts.size() && remaining > 0.0; ++m) {
        const bool last = m + 1 == amounts.size();
        const double take = last ? remaining : std::min(remaining, amounts[m]);
        cost += tech.slopes[m] * take;
        remaining -= take;
    }
    return cost;
}

double extraction_rate_cost(double q, const TechParams& tech) {
    if (!(q >= 0.0)) throw DomainError("extraction_rate_cost: extraction must be >= 0");
    return (tech.alpha_er * q + tech.beta_er) * q + tech.gamma_er;
}

double period_profit(std::size_t t, std::span<const double> q_prefix, double tau_t,
                     const TechParams& tech, const ExtendedModel& model) {
    if (t >= model.periods()) throw DomainError("period_profit: period index out of range");
    if (q_prefix.size() != t + 1) throw DomainError("period_profit: prefix length must be t + 1");
    double before = 0.0;
    for (std::size_t s = 0; s < t; ++s) {
        if (!(q_prefix[s] >= 0.0)) throw DomainError("period_profit: extraction must be >= 0");
        before += q_prefix[s];
    }
    const double q = q_prefix[t];
    if (!(q >= 0.0)) throw DomainError("period_profit: extraction must be >= 0");
    const double sales = (model.alpha[t] - model.beta[t] * q) * q;
    const double purification =
        cumulative_cost(before + q, tech, model.strata) - cumulative_cost(before, tech, model.strata);
    return sales - extraction_rate_cost(q, tech) - purification - tau_t * q;
}

double follower_total_profit(std::span<const double> q, std::span<const double> tau,
                             const TechParams& tech, const ExtendedModel& model) {
    const std::size_t T = model.periods();
    if (q.size() != T || tau.size() != T)
        throw DomainError("follower_total_profit: schedule length must equal the number of periods");
    double total = 0.0;
    double cum = 0.0;
    double cost_before = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        if (!(q[t] >= 0.0)) throw DomainError("follower_total_profit: extraction must be >= 0");
        cum += q[t];
        const double cost_now = cumulative_cost(cum, tech, model.strata);
        const double pi = (model.alpha[t] - model.beta[t] * q[t]) * q[t] - extraction_rate_cost(q[t], tech) -
                          (cost_now - cost_before) - tau[t] * q[t];
        total += model.discount(t) * pi;
        cost_before = cost_now;
    }
    return total;
}

double follower_total_profit(const FollowerResponse& resp, const LeaderStrategy& strat,
                             const ExtendedModel& model) {
    return follower_total_profit(resp.q, strat.tau, model.tech(resp.tech_id), model);
}

ObjectivePoint leader_objectives(const FollowerResponse& resp, const LeaderStrategy& strat,
                                 const ExtendedModel& model) {
    const std::size_t T = model.periods();
    if (resp.q.size() != T || strat.tau.size() != T)
        throw DomainError("leader_objectives: schedule length must equal the number of periods");
    const TechParams& tech = model.tech(resp.tech_id);
    ObjectivePoint out;
    for (std::size_t t = 0; t < T; ++t) {
        out.revenue += model.discount(t) * strat.tau[t] * resp.q[t];
        out.damage += tech.k * resp.q[t];
    }
    out.profit = follower_total_profit(resp.q, strat.tau, tech, model);
    return out;
}

AnalyticalParams default_analytical_params() {
    return AnalyticalParams{100.0, 1.0, 1.0, 1.0, 0.0, 1.0};
}

ExtendedModel default_extended_model() {
    ExtendedModel m;
    m.alpha = {50.0, 55.0, 60.0, 65.0, 70.0};
    m.beta = {0.1, 0.1, 0.1, 0.1, 0.1};
    m.strata = StrataTable({20.0, 20.0, 20.0, 20.0, 20.0});
    m.discount_rate = 0.0;
    m.techs = {
        {1, 3.0, 0.5, 5.0, 10.0, {1.0, 1.5, 2.25, 3.375, 5.063}},
        {2, 5.0, 0.4, 4.0, 8.0, {1.0, 1.4, 1.96, 2.744, 3.842}},
        {3, 8.0, 0.3, 4.0, 5.0, {0.8, 1.2, 1.8, 2.7, 4.05}},
        {4, 10.0, 0.3, 2.0, 5.0, {0.6, 0.9, 1.35, 2.025, 3.038}},
    };
    m.fill_default_bounds();
    return m;
}

ExtendedModel embed_analytical(const AnalyticalParams& p) {
    ExtendedModel m;
    m.alpha = {p.alpha};
    m.beta = {p.beta};
    m.strata = StrataTable({1e6 * std::max(1.0, p.alpha / p.beta)});
    m.techs = {{1, p.k, p.delta, p.gamma, p.phi, {0.0}}};
    m.fill_default_bounds();
    return m;
}

}  // namespace minetax
