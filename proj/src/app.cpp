#include "minetax/app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "minetax/analytical.hpp"
#include "minetax/report.hpp"
#include "minetax/verify.hpp"

namespace minetax::app {
namespace {

using nlohmann::json;

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("--out: cannot write " + path.string());
    return f;
}

void prepare_out(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out, ec);
    if (ec) throw ConfigError("--out: cannot create " + cfg.out.string() + ": " + ec.message());
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string table_line(const verify::CheckResult& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-4s  %-45s measured %-12.4g tolerance %-10.3g %8.2fs  ", r.passed ? "PASS" : "FAIL",
                  r.name.c_str(), r.measured, r.tolerance, r.seconds);
    return buf + r.detail;
}

}  // namespace

void RunConfig::validate() const {
    if (model != "analytical" && model != "extended") throw ConfigError("--model: expected analytical or extended");
    if (points < 2) throw ConfigError("--points: need at least 2");
    if (pop_size < 4 || pop_size % 2 != 0) throw ConfigError("--pop-size: need an even number >= 4");
    if (generations < 0) throw ConfigError("--generations: must be >= 0");
    if (threads < 1) throw ConfigError("--threads: must be >= 1");
    if (tech != "all") {
        std::size_t used = 0;
        try {
            (void)std::stoi(tech, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tech.size()) throw ConfigError("--tech: expected 'all' or a technology id");
    }
    if (frontier_combined.has_value() != !frontier_parts.empty())
        throw ConfigError("--frontier-combined and --frontier-part go together");
}

ModelConfig resolve_model(const RunConfig& cfg) { return cfg.config_path ? load_config(*cfg.config_path) : default_config(); }

EaConfig ea_config(const RunConfig& cfg) {
    EaConfig ea;
    ea.population_size = cfg.pop_size;
    ea.max_generations = cfg.generations;
    ea.seed = cfg.seed;
    ea.tech_choice = cfg.tech_choice;
    ea.lower_mode = cfg.lower_mode;
    ea.lower_ea.seed = cfg.seed;
    ea.threads = cfg.threads;
    return ea;
}

std::optional<int> tech_filter(const RunConfig& cfg, const ExtendedModel& model) {
    if (cfg.tech == "all") return std::nullopt;
    const int id = std::stoi(cfg.tech);
    if (!model.has_tech(id)) throw ConfigError("--tech: unknown technology " + cfg.tech);
    return id;
}

std::vector<ArchiveEntry> apply_bounds(const std::vector<ArchiveEntry>& entries, const RunConfig& cfg) {
    std::vector<ArchiveEntry> kept;
    for (const auto& e : entries) {
        if (cfg.min_revenue && e.objectives.revenue < *cfg.min_revenue) continue;
        if (cfg.max_damage && e.objectives.damage > *cfg.max_damage) continue;
        kept.push_back(e);
    }
    return kept;
}

int run_analytical(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.validate();
    const AnalyticalParams p = resolve_model(cfg).analytical;
    const auto sweep = analytical::pareto_sweep(p, cfg.points);
    std::vector<analytical::WeightedSolution> kept;
    for (const auto& s : sweep) {
        if (cfg.min_revenue && s.revenue < *cfg.min_revenue) continue;
        if (cfg.max_damage && s.damage > *cfg.max_damage) continue;
        kept.push_back(s);
    }
    prepare_out(cfg);
    auto f = open_output(cfg.out / "sweep.csv");
    report::write_sweep_csv(f, kept);
    const auto& lo = sweep.front();
    const auto& hi = sweep.back();
    out << "analytical sweep: " << kept.size() << " of " << sweep.size() << " points, w in ["
        << report::format_number(lo.w) << ", " << report::format_number(hi.w) << "], endpoints (revenue, damage) ("
        << report::format_number(lo.revenue) << ", " << report::format_number(lo.damage) << ") and ("
        << report::format_number(hi.revenue) << ", " << report::format_number(hi.damage) << ")\n";
    if (kept.empty()) {
        err << "warning: no sweep point satisfies the objective bounds\n";
        return empty_result;
    }
    return ok;
}

int run_extended(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.validate();
    const ModelConfig mc = resolve_model(cfg);
    const ExtendedModel& model = mc.extended;
    const auto filter = tech_filter(cfg, model);
    const EaConfig ea = ea_config(cfg);
    ea.validate();
    prepare_out(cfg);

    const auto start = std::chrono::steady_clock::now();
    const EvolveResult result = evolve(model, ea, filter);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto rows = apply_bounds(result.archive.sorted_by_damage(), cfg);

    {
        auto f = open_output(cfg.out / "frontier.csv");
        report::write_frontier_csv(f, rows, model.periods());
    }
    {
        auto f = open_output(cfg.out / "schedule.csv");
        report::write_schedule_csv(f, rows, model);
    }
    json meta;
    meta["config"] = to_json(mc);
    meta["run"] = {{"model", cfg.model},
                   {"tech", cfg.tech},
                   {"tech_choice", to_string(cfg.tech_choice)},
                   {"lower_mode", to_string(cfg.lower_mode)},
                   {"population_size", cfg.pop_size},
                   {"max_generations", cfg.generations},
                   {"seed", cfg.seed},
                   {"threads", cfg.threads},
                   {"min_revenue", optional_number(cfg.min_revenue)},
                   {"max_damage", optional_number(cfg.max_damage)}};
    meta["generations_executed"] = result.generations;
    meta["stagnated"] = result.stagnated;
    meta["evaluations"] = result.evaluations;
    meta["untagged_lower_solves"] = result.untagged;
    meta["archive_size"] = result.archive.size();
    meta["rows_written"] = rows.size();
    meta["negative_profit_rows"] =
        std::count_if(rows.begin(), rows.end(), [](const ArchiveEntry& e) { return e.objectives.profit < 0.0; });
    meta["hypervolume"] = result.hypervolume_history.empty() ? 0.0 : result.hypervolume_history.back();
    meta["wall_time_seconds"] = wall;
    {
        auto f = open_output(cfg.out / "meta.json");
        f << meta.dump(2) << '\n';
    }
    out << "extended run: " << rows.size() << " of " << result.archive.size() << " archive points after "
        << result.generations << " generations (" << result.evaluations << " evaluations, " << result.untagged
        << " untagged) in " << report::format_number(wall) << " s\n";
    if (rows.empty()) {
        err << "warning: no frontier point satisfies the objective bounds\n";
        return empty_result;
    }
    return ok;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    cfg.validate();
    const ModelConfig mc = resolve_model(cfg);
    const AnalyticalParams& p = mc.analytical;
    const ExtendedModel& model = mc.extended;
    std::vector<verify::CheckResult> results;
    auto emit = [&](verify::CheckResult r) {
        out << table_line(r) << '\n' << std::flush;
        results.push_back(std::move(r));
    };

    emit(verify::convexity(model));
    const double weights[] = {0.02, 0.1, 0.25, 0.5, 0.75, 1.0};
    emit(verify::closed_form(p, weights));
    emit(verify::threshold(p, p.k / (p.alpha - p.gamma + p.k)));
    const double q1 = (p.alpha - p.gamma) / (4.0 * (p.beta + p.delta));
    emit(verify::endpoints(p, 0.5 * (p.alpha - p.gamma) * q1, p.k * q1));
    emit(verify::telescoping(model, 1000, cfg.seed));

    // A short extended run, written twice, read back and re-evaluated.
    {
        EaConfig small = ea_config(cfg);
        small.population_size = 20;
        small.max_generations = 10;
        std::string text[2];
        std::vector<report::FrontierRow> rows;
        for (auto& s : text) {
            const auto res = evolve(model, small);
            std::ostringstream os;
            report::write_frontier_csv(os, res.archive.sorted_by_damage(), model.periods());
            s = os.str();
        }
        emit(verify::identical("repeated run gives identical frontier", text[0], text[1]));
        std::istringstream is(text[0]);
        emit(verify::csv_reevaluation(report::read_frontier_csv(is), model));
    }

    if (!cfg.quick) {
        EaConfig ea = ea_config(cfg);
        ea.population_size = 60;
        ea.max_generations = 200;
        emit(verify::analytical_ea(p, ea));
        emit(verify::oracle_equivalence(model, 50, cfg.seed));
        EaConfig per_tech = ea;
        per_tech.max_generations = 400;
        EaConfig all = per_tech;
        all.population_size = 120;
        const auto study = verify::frontier_study(model, per_tech, all);
        emit(verify::composition(study));
        emit(verify::strata_kinks(study, model));
    }

    if (cfg.frontier_combined) {
        const auto combined = report::read_frontier_csv(*cfg.frontier_combined);
        std::vector<ObjectivePoint> all_points;
        std::vector<ObjectivePoint> part_points;
        for (const auto& r : combined) all_points.push_back(r.objectives);
        std::vector<report::FrontierRow> every = combined;
        for (const auto& path : cfg.frontier_parts)
            for (const auto& r : report::read_frontier_csv(path)) {
                part_points.push_back(r.objectives);
                every.push_back(r);
            }
        auto r = verify::composition(part_points, all_points);
        r.name = "frontier files: parts vs combined";
        emit(std::move(r));
        auto re = verify::csv_reevaluation(every, model);
        re.name = "frontier files re-evaluate";
        emit(std::move(re));
    }

    std::size_t failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    out << (failed == 0 ? "all " + std::to_string(results.size()) + " checks passed"
                        : std::to_string(failed) + " of " + std::to_string(results.size()) + " checks failed")
        << '\n';
    return failed == 0 ? ok : verification_failed;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.verify) return run_verify(cfg, out, err);
        return cfg.model == "analytical" ? run_analytical(cfg, out, err) : run_extended(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
    }
    return usage_error;
}

}  // namespace minetax::app
