#ifndef MINETAX_MODEL_HPP
#define MINETAX_MODEL_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace minetax {

/// Thrown when an input falls outside the domain of a model function or a
/// parameter set violates its invariants.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Constants of the single-period model:
///   price p(q) = alpha - beta q, cost c(q) = delta q^2 + gamma q + phi,
///   damage D = k q.
struct AnalyticalParams {
    double alpha = 100.0;
    double beta = 1.0;
    double delta = 1.0;
    double gamma = 1.0;
    double phi = 0.0;
    double k = 1.0;

    void validate() const;
    bool operator==(const AnalyticalParams&) const = default;
};

/// One technology alternative: pollution coefficient, quadratic extraction
/// rate cost and the per-stratum marginal extraction/purification costs.
struct TechParams {
    int id = 1;
    double k = 1.0;
    double alpha_er = 0.0;
    double beta_er = 0.0;
    double gamma_er = 0.0;
    std::vector<double> slopes;

    void validate() const;
    bool operator==(const TechParams&) const = default;
};

/// Ore strata ordered by depth. Breakpoints are the prefix sums of the
/// stratum amounts.
class StrataTable {
public:
    StrataTable() = default;
    explicit StrataTable(std::vector<double> amounts);

    const std::vector<double>& amounts() const { return amounts_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    std::size_t size() const { return amounts_.size(); }
    double total() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }

    /// Zero-based index of the stratum being mined when cumulative
    /// extraction equals x. A breakpoint belongs to the stratum it closes;
    /// anything past the last breakpoint reports the last stratum.
    std::size_t stratum_of(double x) const;

    bool operator==(const StrataTable&) const = default;

private:
    std::vector<double> amounts_;
    std::vector<double> breakpoints_;
};

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const Bounds&) const = default;
};

/// Multi-period model. Periods are indexed from zero in code.
struct ExtendedModel {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<TechParams> techs;
    StrataTable strata;
    double discount_rate = 0.0;
    std::vector<Bounds> tau_bounds;
    std::vector<Bounds> q_bounds;

    std::size_t periods() const { return alpha.size(); }
    double stock() const { return strata.total(); }
    double discount(std::size_t t) const;

    const TechParams& tech(int id) const;
    bool has_tech(int id) const;

    /// Fills empty bound vectors with the defaults: tau in [0, alpha_t] and
    /// q in [0, alpha_t / (2 beta_t)].
    void fill_default_bounds();
    void validate() const;

    bool operator==(const ExtendedModel&) const = default;
};

struct LeaderStrategy {
    std::vector<double> tau;
    bool operator==(const LeaderStrategy&) const = default;
};

struct FollowerResponse {
    std::vector<double> q;
    int tech_id = 1;
    bool operator==(const FollowerResponse&) const = default;
};

struct ObjectivePoint {
    double revenue = 0.0;
    double damage = 0.0;
    double profit = 0.0;
};

/// Cumulative extraction and purification cost C(x): piecewise linear with
/// slope slopes[m] inside stratum m, continued at the last slope past the
/// final breakpoint. C(0) = 0.
double cumulative_cost(double x, const TechParams& tech, const StrataTable& strata);

/// alpha_er q^2 + beta_er q + gamma_er. The fixed part is charged even when
/// q = 0.
double extraction_rate_cost(double q, const TechParams& tech);

/// Undiscounted profit of period t given the extraction of periods 0..t
/// (q_prefix.size() == t + 1). The extraction/purification cost of the
/// period is C(cum_t) - C(cum_{t-1}).
double period_profit(std::size_t t, std::span<const double> q_prefix, double tau_t,
                     const TechParams& tech, const ExtendedModel& model);

/// Discounted total profit, sum_t (1 + r)^-t pi_t.
double follower_total_profit(std::span<const double> q, std::span<const double> tau,
                             const TechParams& tech, const ExtendedModel& model);
double follower_total_profit(const FollowerResponse& resp, const LeaderStrategy& strat,
                             const ExtendedModel& model);

/// Discounted tax revenue, undiscounted damage and the follower's profit.
ObjectivePoint leader_objectives(const FollowerResponse& resp, const LeaderStrategy& strat,
                                 const ExtendedModel& model);

/// Parameters of the single-period model.
AnalyticalParams default_analytical_params();

/// The five-period, four-technology, five-stratum gold mine.
ExtendedModel default_extended_model();

/// The single-period model written as a one-period extended instance with
/// one technology and a zero-cost stratum larger than any optimum, so that
/// period_profit reduces to the single-period profit.
ExtendedModel embed_analytical(const AnalyticalParams& p);

}  // namespace minetax

#endif
