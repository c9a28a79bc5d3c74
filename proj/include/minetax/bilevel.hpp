#ifndef MINETAX_BILEVEL_HPP
#define MINETAX_BILEVEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minetax/lower_solver.hpp"
#include "minetax/model.hpp"
#include "minetax/pareto.hpp"

namespace minetax {

enum class LowerMode { deterministic, ea };

/// Who picks the technology. `leader`: the technology is an upper-level
/// variable and the follower optimizes extraction for it. `follower`: the
/// follower optimizes over technology and extraction jointly.
enum class TechChoice { leader, follower };

std::string to_string(LowerMode m);
std::string to_string(TechChoice c);
LowerMode parse_lower_mode(const std::string& s);
TechChoice parse_tech_choice(const std::string& s);

/// Upper-level individual. `tech_id` is only read when the leader picks the
/// technology.
struct UpperGenome {
    LeaderStrategy strategy;
    int tech_id = 0;
};

struct EaConfig {
    int population_size = 60;
    int max_generations = 200;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // negative: 1 / number of decision variables
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    std::uint64_t seed = 1;
    LowerMode lower_mode = LowerMode::deterministic;
    LowerEaConfig lower_ea;
    TechChoice tech_choice = TechChoice::leader;
    int stagnation_window = 20;
    double stagnation_tolerance = 1e-4;
    unsigned threads = 1;
    std::vector<UpperGenome> initial_population;  // optional; padded with random genomes

    void validate() const;
};

struct EvolveResult {
    ParetoArchive archive;
    int generations = 0;  // generations executed after the initial population
    std::size_t evaluations = 0;
    std::size_t untagged = 0;  // lower-level solves that missed the stationarity contract
    bool stagnated = false;
    double reference_revenue = 0.0;
    double reference_damage = 0.0;
    std::vector<double> hypervolume_history;  // archive hypervolume after each generation, initial one first
};

/// Fixed hypervolume reference damage: the largest pollution coefficient
/// times the sum of the extraction upper bounds.
double reference_damage(const ExtendedModel& model);

/// Nested evolutionary search for the leader's revenue/damage frontier.
/// Every strategy is paired with its lower-level best response; tagged pairs
/// feed a nondominated archive, the population evolves by nondominated rank
/// and crowding with simulated binary crossover and polynomial mutation.
/// With `tech_filter` the follower is restricted to that technology.
EvolveResult evolve(const ExtendedModel& model, const EaConfig& config, std::optional<int> tech_filter = std::nullopt,
                    const LocalSearchOptions& lower_opts = {});

/// A downward revenue jump found between two consecutive frontier points
/// whose cumulative extraction straddles a stratum breakpoint.
struct StrataKink {
    double breakpoint = 0.0;
    std::size_t left = 0;   // indices into the damage-sorted frontier
    std::size_t right = 0;
    double left_slope = 0.0;   // d revenue / d damage just before the crossing
    double chord_slope = 0.0;  // across the crossing pair
    double drop = 0.0;         // left-line extrapolation minus actual revenue, over revenue range
};

/// Scans a frontier sorted by damage for consecutive points whose total
/// extraction straddles a breakpoint where the marginal cost of the
/// technology steps up (the end of the stock does not count, the last slope
/// continues past it). The left slope is measured over at
/// least `slope_window` of the damage range inside the stratum being left.
/// A kink is reported when the chord across the crossing is flatter than
/// `max_slope_ratio` times the left slope and the left line overshoots the
/// right point by at least `min_drop` of the revenue range.
std::vector<StrataKink> detect_strata_kinks(const std::vector<ArchiveEntry>& sorted_frontier,
                                            const ExtendedModel& model, double max_slope_ratio = 0.5,
                                            double min_drop = 1e-3, double slope_window = 0.02);

}  // namespace minetax

#endif
