#include "minetax/bilevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "minetax/variation.hpp"

namespace minetax {

std::string to_string(LowerMode m) { return m == LowerMode::deterministic ? "deterministic" : "ea"; }

std::string to_string(TechChoice c) { return c == TechChoice::leader ? "leader" : "follower"; }

LowerMode parse_lower_mode(const std::string& s) {
    if (s == "deterministic") return LowerMode::deterministic;
    if (s == "ea" || s == "ea+local-search") return LowerMode::ea;
    throw DomainError("unknown lower solver mode '" + s + "'");
}

TechChoice parse_tech_choice(const std::string& s) {
    if (s == "leader") return TechChoice::leader;
    if (s == "follower") return TechChoice::follower;
    throw DomainError("unknown technology choice '" + s + "'");
}

void EaConfig::validate() const {
    if (population_size < 4 || population_size % 2 != 0)
        throw DomainError("population_size must be even and >= 4");
    if (max_generations < 0) throw DomainError("max_generations must be >= 0");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw DomainError("crossover_rate must lie in [0, 1]");
    if (!(mutation_rate <= 1.0)) throw DomainError("mutation_rate must lie in [0, 1]");
    if (!(eta_crossover >= 0.0) || !(eta_mutation >= 0.0))
        throw DomainError("distribution indices must be >= 0");
    if (stagnation_window < 1) throw DomainError("stagnation_window must be >= 1");
    if (threads < 1) throw DomainError("threads must be >= 1");
}

double reference_damage(const ExtendedModel& model) {
    double kmax = 0.0;
    for (const auto& t : model.techs) kmax = std::max(kmax, t.k);
    double qsum = 0.0;
    for (const auto& b : model.q_bounds) qsum += b.upper;
    return kmax * qsum;
}

namespace {

struct Member {
    UpperGenome genome;
    BestResponse lower;
    ObjectivePoint objectives;
    int rank = 0;
    double crowding = 0.0;
};

class Evolver {
public:
    Evolver(const ExtendedModel& model, const EaConfig& cfg, std::optional<int> tech_filter,
            const LocalSearchOptions& opts)
        : model_(model), cfg_(cfg), filter_(tech_filter), opts_(opts), rng_(mix_seed(cfg.seed, 0x5eed)) {
        leader_picks_tech_ = !filter_ && cfg_.tech_choice == TechChoice::leader && model_.techs.size() > 1;
        const double variables = static_cast<double>(model_.periods() + (leader_picks_tech_ ? 1 : 0));
        mutation_rate_ = cfg_.mutation_rate < 0.0 ? 1.0 / variables : cfg_.mutation_rate;
        result_.reference_damage = reference_damage(model_);
    }

    EvolveResult run() {
        const std::size_t N = static_cast<std::size_t>(cfg_.population_size);
        std::vector<UpperGenome> initial;
        for (const auto& g : cfg_.initial_population) {
            if (initial.size() == N) break;
            initial.push_back(normalized(g));
        }
        while (initial.size() < N) initial.push_back(random_genome());

        std::vector<Member> pop = evaluate(std::move(initial), 0);
        pop = environmental_selection(std::move(pop), N);
        record_hypervolume();

        for (int gen = 1; gen <= cfg_.max_generations; ++gen) {
            std::vector<UpperGenome> children = make_offspring(pop);
            std::vector<Member> offspring = evaluate(std::move(children), gen);
            for (auto& m : offspring) pop.push_back(std::move(m));
            pop = environmental_selection(std::move(pop), N);
            result_.generations = gen;
            record_hypervolume();
            const auto& hv = result_.hypervolume_history;
            const std::size_t w = static_cast<std::size_t>(cfg_.stagnation_window);
            if (hv.size() > w && std::abs(hv.back() - hv[hv.size() - 1 - w]) < cfg_.stagnation_tolerance) {
                result_.stagnated = true;
                break;
            }
        }
        return std::move(result_);
    }

private:
    std::vector<int> allowed_techs() const {
        std::vector<int> ids;
        if (filter_) {
            ids.push_back(*filter_);
        } else {
            for (const auto& t : model_.techs) ids.push_back(t.id);
        }
        return ids;
    }

    UpperGenome normalized(UpperGenome g) const {
        const std::size_t T = model_.periods();
        if (g.strategy.tau.size() != T) throw DomainError("initial strategy length must equal the number of periods");
        for (std::size_t t = 0; t < T; ++t)
            g.strategy.tau[t] = std::clamp(g.strategy.tau[t], model_.tau_bounds[t].lower, model_.tau_bounds[t].upper);
        const auto ids = allowed_techs();
        if (std::find(ids.begin(), ids.end(), g.tech_id) == ids.end()) g.tech_id = ids.front();
        return g;
    }

    UpperGenome random_genome() {
        UpperGenome g;
        g.strategy.tau.resize(model_.periods());
        for (std::size_t t = 0; t < model_.periods(); ++t) {
            const auto& b = model_.tau_bounds[t];
            g.strategy.tau[t] = b.lower + (b.upper - b.lower) * uniform01(rng_);
        }
        const auto ids = allowed_techs();
        g.tech_id = ids[static_cast<std::size_t>(rng_() % ids.size())];
        return g;
    }

    BestResponse solve_lower(const UpperGenome& g, int gen, std::size_t idx) const {
        std::optional<int> techs = filter_;
        if (leader_picks_tech_) techs = g.tech_id;
        if (!techs && model_.techs.size() == 1) techs = model_.techs.front().id;
        if (cfg_.lower_mode == LowerMode::deterministic) return best_response(g.strategy, model_, techs, opts_);
        LowerEaConfig lower = cfg_.lower_ea;
        lower.seed = mix_seed(mix_seed(cfg_.seed, cfg_.lower_ea.seed), static_cast<std::uint64_t>(gen), idx);
        return best_response_ea(g.strategy, model_, lower, techs, opts_);
    }

    std::vector<Member> evaluate(std::vector<UpperGenome> genomes, int gen) {
        std::vector<Member> out(genomes.size());
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                out[i].genome = std::move(genomes[i]);
                out[i].lower = solve_lower(out[i].genome, gen, i);
                out[i].genome.tech_id = out[i].lower.response.tech_id;
                out[i].objectives = leader_objectives(out[i].lower.response, out[i].genome.strategy, model_);
            }
        };
        const std::size_t workers = std::min<std::size_t>(cfg_.threads, out.size());
        if (workers <= 1) {
            work(0, out.size());
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (out.size() + workers - 1) / workers;
            for (std::size_t w = 0; w < workers; ++w) {
                const std::size_t b = w * chunk;
                const std::size_t e = std::min(out.size(), b + chunk);
                if (b < e) pool.emplace_back(work, b, e);
            }
            for (auto& t : pool) t.join();
        }
        // Archive updates happen serially, in index order.
        for (const auto& m : out) {
            ++result_.evaluations;
            if (!m.lower.optimality_tag) {
                ++result_.untagged;
                continue;
            }
            result_.archive.insert({m.genome.strategy, m.lower.response, m.objectives, true});
        }
        return out;
    }

    std::vector<Member> environmental_selection(std::vector<Member> pool, std::size_t n) const {
        std::vector<std::size_t> tagged;
        std::vector<std::size_t> untagged;
        for (std::size_t i = 0; i < pool.size(); ++i) (pool[i].lower.optimality_tag ? tagged : untagged).push_back(i);

        std::vector<ObjectivePoint> points;
        points.reserve(tagged.size());
        for (std::size_t i : tagged) points.push_back(pool[i].objectives);

        std::vector<Member> next;
        next.reserve(n);
        int rank = 0;
        for (const auto& front : nondominated_sort(points)) {
            if (next.size() >= n) break;
            const auto crowd = crowding_distance(points, front);
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            if (next.size() + front.size() > n)
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
            for (std::size_t k : order) {
                if (next.size() >= n) break;
                Member m = std::move(pool[tagged[front[k]]]);
                m.rank = rank;
                m.crowding = crowd[k];
                next.push_back(std::move(m));
            }
            ++rank;
        }
        for (std::size_t i : untagged) {
            if (next.size() >= n) break;
            Member m = std::move(pool[i]);
            m.rank = std::numeric_limits<int>::max();
            m.crowding = 0.0;
            next.push_back(std::move(m));
        }
        return next;
    }

    const Member& tournament(const std::vector<Member>& pop) {
        const Member& a = pop[static_cast<std::size_t>(rng_() % pop.size())];
        const Member& b = pop[static_cast<std::size_t>(rng_() % pop.size())];
        if (a.rank != b.rank) return a.rank < b.rank ? a : b;
        return a.crowding >= b.crowding ? a : b;
    }

    std::vector<UpperGenome> make_offspring(const std::vector<Member>& pop) {
        const std::size_t N = pop.size();
        const auto ids = allowed_techs();
        std::vector<UpperGenome> children;
        children.reserve(N);
        while (children.size() < N) {
            UpperGenome c1 = tournament(pop).genome;
            UpperGenome c2 = tournament(pop).genome;
            if (uniform01(rng_) < cfg_.crossover_rate) {
                sbx_crossover(c1.strategy.tau, c2.strategy.tau, model_.tau_bounds, cfg_.eta_crossover, rng_);
                if (leader_picks_tech_ && uniform01(rng_) < 0.5) std::swap(c1.tech_id, c2.tech_id);
            }
            for (UpperGenome* c : {&c1, &c2}) {
                polynomial_mutation(c->strategy.tau, model_.tau_bounds, cfg_.eta_mutation, mutation_rate_, rng_);
                if (leader_picks_tech_ && uniform01(rng_) < mutation_rate_)
                    c->tech_id = ids[static_cast<std::size_t>(rng_() % ids.size())];
            }
            children.push_back(std::move(c1));
            if (children.size() < N) children.push_back(std::move(c2));
        }
        return children;
    }

    void record_hypervolume() {
        const auto pts = result_.archive.objectives();
        result_.hypervolume_history.push_back(
            hypervolume(pts, result_.reference_revenue, result_.reference_damage));
    }

    const ExtendedModel& model_;
    const EaConfig& cfg_;
    std::optional<int> filter_;
    LocalSearchOptions opts_;
    Rng rng_;
    bool leader_picks_tech_ = false;
    double mutation_rate_ = 0.0;
    EvolveResult result_;
};

}  // namespace

EvolveResult evolve(const ExtendedModel& model, const EaConfig& config, std::optional<int> tech_filter,
                    const LocalSearchOptions& lower_opts) {
    model.validate();
    config.validate();
    if (tech_filter && !model.has_tech(*tech_filter))
        throw DomainError("unknown technology id " + std::to_string(*tech_filter));
    return Evolver(model, config, tech_filter, lower_opts).run();
}

std::vector<StrataKink> detect_strata_kinks(const std::vector<ArchiveEntry>& sorted_frontier,
                                            const ExtendedModel& model, double max_slope_ratio, double min_drop,
                                            double slope_window) {
    std::vector<StrataKink> kinks;
    const auto& f = sorted_frontier;
    if (f.size() < 3) return kinks;
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (const auto& e : f) {
        rmin = std::min(rmin, e.objectives.revenue);
        rmax = std::max(rmax, e.objectives.revenue);
    }
    const double range = rmax > rmin ? rmax - rmin : 1.0;
    const double damage_range = std::max(f.back().objectives.damage - f.front().objectives.damage, 1e-300);
    auto total = [](const ArchiveEntry& e) { return std::accumulate(e.response.q.begin(), e.response.q.end(), 0.0); };
    const auto& bps = model.strata.breakpoints();

    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        const double q_left = total(f[i]);
        const double q_right = total(f[i + 1]);
        auto crossed = std::find_if(bps.begin(), bps.end(), [&](double b) { return q_left <= b && b < q_right; });
        if (crossed == bps.end()) continue;
        // Only breakpoints where the marginal cost steps up can bend the frontier.
        const auto m = static_cast<std::size_t>(crossed - bps.begin());
        const auto& slopes = model.tech(f[i].response.tech_id).slopes;
        if (m + 1 >= slopes.size() || !(slopes[m + 1] > slopes[m])) continue;
        const double stratum_start = crossed == bps.begin() ? 0.0 : *(crossed - 1);

        // Left slope over a damage window inside the stratum being left.
        const auto& b = f[i].objectives;
        std::optional<std::size_t> anchor;
        for (std::size_t j = i; j-- > 0;) {
            if (total(f[j]) < stratum_start) break;
            if (b.damage - f[j].objectives.damage >= slope_window * damage_range) {
                anchor = j;
                break;
            }
        }
        if (!anchor) continue;
        const auto& a = f[*anchor].objectives;
        const auto& c = f[i + 1].objectives;
        if (!(c.damage > b.damage)) continue;
        const double left_slope = (b.revenue - a.revenue) / (b.damage - a.damage);
        const double chord_slope = (c.revenue - b.revenue) / (c.damage - b.damage);
        const double drop = (b.revenue + left_slope * (c.damage - b.damage) - c.revenue) / range;
        if (left_slope > 0.0 && chord_slope < max_slope_ratio * left_slope && drop >= min_drop)
            kinks.push_back({*crossed, i, i + 1, left_slope, chord_slope, drop});
    }
    return kinks;
}

}  // namespace minetax
