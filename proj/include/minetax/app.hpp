#ifndef MINETAX_APP_HPP
#define MINETAX_APP_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "minetax/bilevel.hpp"
#include "minetax/config_io.hpp"

namespace minetax::app {

enum ExitCode : int { ok = 0, usage_error = 1, verification_failed = 2, empty_result = 3 };

struct RunConfig {
    std::string model = "extended";  // analytical | extended
    std::optional<std::filesystem::path> config_path;
    std::string tech = "all";  // "all" or a technology id
    std::size_t points = 100;
    int pop_size = 60;
    int generations = 200;
    std::uint64_t seed = 1;
    std::filesystem::path out = "out";
    std::optional<double> min_revenue;
    std::optional<double> max_damage;
    bool verify = false;
    bool quick = false;  // verify without the evolutionary and oracle-heavy checks
    TechChoice tech_choice = TechChoice::leader;
    LowerMode lower_mode = LowerMode::deterministic;
    unsigned threads = 1;
    // Frontier files checked by --verify: one combined run and its parts.
    std::optional<std::filesystem::path> frontier_combined;
    std::vector<std::filesystem::path> frontier_parts;

    /// Throws ConfigError naming the offending option.
    void validate() const;
};

/// Model parameters named by the run: the config file, or the defaults.
ModelConfig resolve_model(const RunConfig& cfg);

EaConfig ea_config(const RunConfig& cfg);

/// Technology filter from `--tech`; nullopt for "all".
std::optional<int> tech_filter(const RunConfig& cfg, const ExtendedModel& model);

/// Entries whose objectives satisfy the configured bounds.
std::vector<ArchiveEntry> apply_bounds(const std::vector<ArchiveEntry>& entries, const RunConfig& cfg);

/// Sweep of the single-period frontier; writes <out>/sweep.csv.
int run_analytical(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Evolutionary solve of the extended model; writes <out>/frontier.csv,
/// <out>/schedule.csv and <out>/meta.json.
int run_extended(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs the verification suite and prints a pass/fail table.
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on `verify` and `model`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace minetax::app

#endif
