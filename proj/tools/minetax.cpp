// minetax: frontier sweeps, evolutionary solves and verification for the
// regulator/mine taxation game.
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "minetax/app.hpp"

int main(int argc, char** argv) {
    using namespace minetax;
    app::RunConfig cfg;
    std::string config_path;
    std::string combined;
    double min_revenue = 0.0;
    double max_damage = 0.0;

    CLI::App cli{"Multi-objective tax design for a mine: closed-form and evolutionary frontiers"};
    cli.add_option("--model", cfg.model, "analytical | extended")->capture_default_str();
    auto* config_opt = cli.add_option("--config", config_path, "JSON model configuration (defaults otherwise)");
    cli.add_option("--tech", cfg.tech, "'all' or a technology id")->capture_default_str();
    cli.add_option("--points", cfg.points, "weights in the analytical sweep")->capture_default_str();
    cli.add_option("--pop-size", cfg.pop_size, "upper-level population size")->capture_default_str();
    cli.add_option("--generations", cfg.generations, "maximum upper-level generations")->capture_default_str();
    cli.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    cli.add_option("--out", cfg.out, "output directory")->capture_default_str();
    auto* min_rev_opt = cli.add_option("--min-revenue", min_revenue, "keep points with at least this revenue");
    auto* max_dmg_opt = cli.add_option("--max-damage", max_damage, "keep points with at most this damage");
    cli.add_flag("--verify", cfg.verify, "run the verification suite instead of a solve");
    cli.add_flag("--quick", cfg.quick, "with --verify: skip the evolutionary and oracle-heavy checks");
    cli.add_option("--tech-choice", cfg.tech_choice, "who picks the technology: leader | follower")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, TechChoice>{{"leader", TechChoice::leader}, {"follower", TechChoice::follower}}));
    cli.add_option("--lower-mode", cfg.lower_mode, "lower-level solver: deterministic | ea")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, LowerMode>{{"deterministic", LowerMode::deterministic}, {"ea", LowerMode::ea}}));
    cli.add_option("--threads", cfg.threads, "worker threads for lower-level solves")->capture_default_str();
    auto* combined_opt = cli.add_option("--frontier-combined", combined, "with --verify: frontier.csv of a combined run");
    cli.add_option("--frontier-part", cfg.frontier_parts, "with --verify: frontier.csv of a per-technology run");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? app::ok : app::usage_error;
    }
    if (*config_opt) cfg.config_path = config_path;
    if (*min_rev_opt) cfg.min_revenue = min_revenue;
    if (*max_dmg_opt) cfg.max_damage = max_damage;
    if (*combined_opt) cfg.frontier_combined = combined;
    return app::run(cfg, std::cout, std::cerr);
}
