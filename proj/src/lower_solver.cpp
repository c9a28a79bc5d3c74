#include "minetax/lower_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "minetax/variation.hpp"

namespace minetax {

namespace {

// Improvements below this are rounding noise of a profit evaluation.
double noise_floor(double f) { return 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f)); }

std::vector<double> clamp_to_bounds(std::span<const double> start, const ExtendedModel& model) {
    std::vector<double> q(model.periods(), 0.0);
    for (std::size_t t = 0; t < q.size(); ++t) {
        const double v = t < start.size() ? start[t] : 0.0;
        q[t] = std::clamp(std::isfinite(v) ? v : 0.0, model.q_bounds[t].lower, model.q_bounds[t].upper);
    }
    return q;
}

// Per-period optimum when the purification cost is linear at the first
// slope. Only used as a starting point.
std::vector<double> decoupled_start(const LeaderStrategy& strat, const TechParams& tech, const ExtendedModel& model) {
    std::vector<double> q(model.periods());
    for (std::size_t t = 0; t < q.size(); ++t) {
        const double margin = model.alpha[t] - tech.beta_er - tech.slopes.front() - strat.tau[t];
        q[t] = margin / (2.0 * (model.beta[t] + tech.alpha_er));
    }
    return clamp_to_bounds(q, model);
}

void check_strategy(const LeaderStrategy& strat, const ExtendedModel& model) {
    if (strat.tau.size() != model.periods())
        throw DomainError("leader strategy length must equal the number of periods");
    for (double v : strat.tau)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("taxes must be finite and >= 0");
}

}  // namespace

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
    if (!(hi > lo)) return lo;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tolerance) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        if (!(c < d)) break;  // bracket collapsed to adjacent doubles
    }
    double x = fc >= fd ? c : d;
    double fx = std::max(fc, fd);
    const double flo = f(lo);
    if (flo >= fx) {
        x = lo;
        fx = flo;
    }
    if (f(hi) > fx) x = hi;
    return x;
}

AscentResult coordinate_ascent(std::span<const double> tau, const TechParams& tech, const ExtendedModel& model,
                               std::span<const double> start, const LocalSearchOptions& opts) {
    const std::size_t T = model.periods();
    AscentResult res;
    res.q = clamp_to_bounds(start, model);
    std::vector<double> trial = res.q;
    auto profit_of = [&](const std::vector<double>& q) { return follower_total_profit(q, tau, tech, model); };
    double f = profit_of(res.q);

    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        res.sweeps = sweep;
        double max_move = 0.0;

        for (std::size_t t = 0; t < T; ++t) {
            trial = res.q;
            auto line = [&](double x) {
                trial[t] = x;
                return profit_of(trial);
            };
            const double x = golden_section_max(line, model.q_bounds[t].lower, model.q_bounds[t].upper,
                                                opts.line_tolerance);
            const double fx = line(x);
            if (fx > f + noise_floor(f)) {
                max_move = std::max(max_move, std::abs(x - res.q[t]));
                res.q[t] = x;
                f = fx;
            }
        }

        if (opts.transfer_moves) {
            for (std::size_t i = 0; i < T; ++i) {
                for (std::size_t j = i + 1; j < T; ++j) {
                    const double s_lo = std::max(model.q_bounds[i].lower - res.q[i], res.q[j] - model.q_bounds[j].upper);
                    const double s_hi = std::min(model.q_bounds[i].upper - res.q[i], res.q[j] - model.q_bounds[j].lower);
                    if (!(s_hi > s_lo)) continue;
                    trial = res.q;
                    const double qi = res.q[i];
                    const double qj = res.q[j];
                    auto line = [&](double s) {
                        trial[i] = std::max(0.0, qi + s);
                        trial[j] = std::max(0.0, qj - s);
                        return profit_of(trial);
                    };
                    const double s = golden_section_max(line, s_lo, s_hi, opts.line_tolerance);
                    const double fs = line(s);
                    if (fs > f + noise_floor(f)) {
                        max_move = std::max(max_move, std::abs(s));
                        res.q[i] = trial[i];
                        res.q[j] = trial[j];
                        f = fs;
                    }
                }
            }
        }

        if (max_move <= opts.move_tolerance) {
            res.converged = true;
            break;
        }
    }
    res.profit = f;
    return res;
}

bool is_stationary(std::span<const double> q, std::span<const double> tau, const TechParams& tech,
                   const ExtendedModel& model, const LocalSearchOptions& opts) {
    const std::size_t T = model.periods();
    const double h = opts.fd_step;
    const double f0 = follower_total_profit(q, tau, tech, model);
    std::vector<double> trial(q.begin(), q.end());

    auto ascent_along = [&](std::size_t i, double di, std::size_t j, double dj) {
        trial.assign(q.begin(), q.end());
        trial[i] += di * h;
        if (j < T) trial[j] += dj * h;
        return (follower_total_profit(trial, tau, tech, model) - f0) / h > opts.stationarity_tolerance;
    };
    auto movable = [&](std::size_t t, double dir) {
        const double x = q[t] + dir * h;
        return x >= model.q_bounds[t].lower && x <= model.q_bounds[t].upper;
    };

    for (std::size_t t = 0; t < T; ++t) {
        for (double dir : {1.0, -1.0})
            if (movable(t, dir) && ascent_along(t, dir, T, 0.0)) return false;
    }
    if (opts.transfer_moves) {
        for (std::size_t i = 0; i < T; ++i)
            for (std::size_t j = 0; j < T; ++j)
                if (i != j && movable(i, 1.0) && movable(j, -1.0) && ascent_along(i, 1.0, j, -1.0)) return false;
    }
    return true;
}

BestResponse best_response_fixed_tech(const LeaderStrategy& strat, const TechParams& tech,
                                      const ExtendedModel& model, const LocalSearchOptions& opts) {
    check_strategy(strat, model);
    const auto start = decoupled_start(strat, tech, model);
    const auto ascent = coordinate_ascent(strat.tau, tech, model, start, opts);
    BestResponse out;
    out.response = {ascent.q, tech.id};
    out.profit = ascent.profit;
    out.optimality_tag = ascent.converged && is_stationary(ascent.q, strat.tau, tech, model, opts);
    return out;
}

bool prefer_response(const BestResponse& a, const BestResponse& b, const LeaderStrategy& strat,
                     const ExtendedModel& model) {
    const double scale = std::max(std::abs(a.profit), std::abs(b.profit));
    const double tol = std::max(1e-9, 1e-9 * scale);
    if (std::abs(a.profit - b.profit) > tol) return a.profit > b.profit;

    const ObjectivePoint oa = leader_objectives(a.response, strat, model);
    const ObjectivePoint ob = leader_objectives(b.response, strat, model);
    const bool a_dom = oa.revenue >= ob.revenue && oa.damage <= ob.damage &&
                       (oa.revenue > ob.revenue || oa.damage < ob.damage);
    const bool b_dom = ob.revenue >= oa.revenue && ob.damage <= oa.damage &&
                       (ob.revenue > oa.revenue || ob.damage < oa.damage);
    if (a_dom != b_dom) return a_dom;
    if (oa.revenue != ob.revenue) return oa.revenue > ob.revenue;
    if (oa.damage != ob.damage) return oa.damage < ob.damage;
    return a.response.tech_id < b.response.tech_id;
}

namespace {

std::vector<const TechParams*> admissible_techs(const ExtendedModel& model, std::optional<int> tech_filter) {
    std::vector<const TechParams*> out;
    if (tech_filter) {
        out.push_back(&model.tech(*tech_filter));
    } else {
        for (const auto& t : model.techs) out.push_back(&t);
    }
    return out;
}

}  // namespace

BestResponse best_response(const LeaderStrategy& strat, const ExtendedModel& model, std::optional<int> tech_filter,
                           const LocalSearchOptions& opts) {
    check_strategy(strat, model);
    std::optional<BestResponse> best;
    for (const TechParams* tech : admissible_techs(model, tech_filter)) {
        BestResponse cand = best_response_fixed_tech(strat, *tech, model, opts);
        if (!best || prefer_response(cand, *best, strat, model)) best = std::move(cand);
    }
    return *best;
}

BestResponse best_response_ea(const LeaderStrategy& strat, const ExtendedModel& model, const LowerEaConfig& cfg,
                              std::optional<int> tech_filter, const LocalSearchOptions& opts) {
    check_strategy(strat, model);
    if (cfg.population_size < 1) throw DomainError("lower EA population size must be >= 1");
    if (cfg.generations < 0) throw DomainError("lower EA generations must be >= 0");
    const std::size_t T = model.periods();
    const std::size_t N = static_cast<std::size_t>(cfg.population_size);
    const double mutation_rate = cfg.mutation_rate < 0.0 ? 1.0 / static_cast<double>(T) : cfg.mutation_rate;

    std::optional<BestResponse> best;
    for (const TechParams* tech : admissible_techs(model, tech_filter)) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(tech->id)));
        struct Member {
            std::vector<double> q;
            double fitness;
        };
        auto evaluate = [&](std::vector<double> q) {
            const double f = follower_total_profit(q, strat.tau, *tech, model);
            return Member{std::move(q), f};
        };

        // Without generations the EA phase is a no-op: an injected start goes
        // straight to the local search.
        const std::size_t initial = cfg.generations == 0 && cfg.start ? 1 : N;
        std::vector<Member> pop;
        pop.reserve(2 * N);
        for (std::size_t i = 0; i < initial; ++i) {
            std::vector<double> q(T);
            if (i == 0 && cfg.start) {
                q = clamp_to_bounds(*cfg.start, model);
            } else {
                for (std::size_t t = 0; t < T; ++t) {
                    const auto& b = model.q_bounds[t];
                    q[t] = b.lower + (b.upper - b.lower) * uniform01(rng);
                }
            }
            pop.push_back(evaluate(std::move(q)));
        }

        auto tournament = [&]() -> const Member& {
            const auto& x = pop[static_cast<std::size_t>(rng() % N)];
            const auto& y = pop[static_cast<std::size_t>(rng() % N)];
            return x.fitness >= y.fitness ? x : y;
        };

        for (int g = 0; g < cfg.generations; ++g) {
            std::vector<Member> offspring;
            offspring.reserve(N + 1);
            while (offspring.size() < N) {
                std::vector<double> c1 = tournament().q;
                std::vector<double> c2 = tournament().q;
                if (uniform01(rng) < cfg.crossover_rate)
                    sbx_crossover(c1, c2, model.q_bounds, cfg.eta_crossover, rng);
                polynomial_mutation(c1, model.q_bounds, cfg.eta_mutation, mutation_rate, rng);
                polynomial_mutation(c2, model.q_bounds, cfg.eta_mutation, mutation_rate, rng);
                offspring.push_back(evaluate(std::move(c1)));
                if (offspring.size() < N) offspring.push_back(evaluate(std::move(c2)));
            }
            for (auto& m : offspring) pop.push_back(std::move(m));
            std::stable_sort(pop.begin(), pop.end(),
                             [](const Member& a, const Member& b) { return a.fitness > b.fitness; });
            pop.resize(N);
        }

        const Member& elite = *std::max_element(pop.begin(), pop.end(), [](const Member& a, const Member& b) {
            return a.fitness < b.fitness;
        });
        BestResponse cand;
        if (cfg.local_search) {
            const auto ascent = coordinate_ascent(strat.tau, *tech, model, elite.q, opts);
            cand.response = {ascent.q, tech->id};
            cand.profit = ascent.profit;
            cand.optimality_tag = ascent.converged && is_stationary(ascent.q, strat.tau, *tech, model, opts);
        } else {
            cand.response = {elite.q, tech->id};
            cand.profit = elite.fitness;
            cand.optimality_tag = is_stationary(elite.q, strat.tau, *tech, model, opts);
        }
        if (!best || prefer_response(cand, *best, strat, model)) best = std::move(cand);
    }
    return *best;
}

}  // namespace minetax
