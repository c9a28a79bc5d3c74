#ifndef MINETAX_PARETO_HPP
#define MINETAX_PARETO_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "minetax/model.hpp"

namespace minetax {

/// Leader dominance: revenue at least as high, damage at most as high, and
/// strictly better in one of them.
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b);

/// Partitions point indices into successive nondominated fronts.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectivePoint> points);

/// Crowding distance of each member of one front (indices into `points`),
/// returned in the order of `front`. Boundary members get +infinity.
std::vector<double> crowding_distance(std::span<const ObjectivePoint> points, std::span<const std::size_t> front);

/// Area dominated by the points and bounded by the reference corner
/// (ref_revenue below, ref_damage above).
double hypervolume(std::span<const ObjectivePoint> points, double ref_revenue, double ref_damage);

struct ArchiveEntry {
    LeaderStrategy strategy;
    FollowerResponse response;
    ObjectivePoint objectives;
    bool optimality_tag = false;
};

/// Nondominated set of lower-level optimal (strategy, response) pairs.
class ParetoArchive {
public:
    /// Admits the entry iff no member dominates it and no member has the
    /// same objective pair; evicts every member it dominates. Returns
    /// whether it was admitted. Untagged entries are rejected with
    /// std::invalid_argument.
    bool insert(ArchiveEntry entry);

    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<ObjectivePoint> objectives() const;

    /// Entries ordered by damage, then revenue.
    std::vector<ArchiveEntry> sorted_by_damage() const;

private:
    std::vector<ArchiveEntry> entries_;
};

/// Nondominated subset (duplicates of an objective pair kept once).
std::vector<ObjectivePoint> nondominated_filter(std::span<const ObjectivePoint> points);

struct ObjectiveScale {
    double revenue_range = 1.0;
    double damage_range = 1.0;
};

/// Ranges of revenue and damage over the given sets (never zero).
ObjectiveScale objective_scale(std::initializer_list<std::span<const ObjectivePoint>> sets);

/// Additive epsilon indicator on normalized objectives: the smallest eps such
/// that every point of `target` is weakly dominated by some point of
/// `approx` after improving that point by eps in both objectives.
double additive_epsilon(std::span<const ObjectivePoint> approx, std::span<const ObjectivePoint> target,
                        const ObjectiveScale& scale);

}  // namespace minetax

#endif
