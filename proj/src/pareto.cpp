#include "minetax/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace minetax {

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) {
    return a.revenue >= b.revenue && a.damage <= b.damage && (a.revenue > b.revenue || a.damage < b.damage);
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectivePoint> points) {
    // Sorting by (damage asc, revenue desc) guarantees no point is dominated
    // by a later one, so each point goes to the first front in which no
    // member dominates it.
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].damage != points[b].damage) return points[a].damage < points[b].damage;
        return points[a].revenue > points[b].revenue;
    });

    std::vector<std::vector<std::size_t>> fronts;
    for (std::size_t i : order) {
        auto dominated_in = [&](const std::vector<std::size_t>& front) {
            return std::any_of(front.rbegin(), front.rend(),
                               [&](std::size_t j) { return dominates(points[j], points[i]); });
        };
        auto it = std::find_if(fronts.begin(), fronts.end(),
                               [&](const std::vector<std::size_t>& f) { return !dominated_in(f); });
        if (it == fronts.end()) {
            fronts.push_back({i});
        } else {
            it->push_back(i);
        }
    }
    for (auto& f : fronts) std::sort(f.begin(), f.end());
    return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectivePoint> points, std::span<const std::size_t> front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    std::vector<std::size_t> order(n);
    for (int objective = 0; objective < 2; ++objective) {
        auto value = [&](std::size_t k) {
            const auto& p = points[front[k]];
            return objective == 0 ? p.revenue : p.damage;
        };
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
        const double span = value(order.back()) - value(order.front());
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        if (span <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (value(order[k + 1]) - value(order[k - 1])) / span;
    }
    return dist;
}

double hypervolume(std::span<const ObjectivePoint> points, double ref_revenue, double ref_damage) {
    std::vector<ObjectivePoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const ObjectivePoint& a, const ObjectivePoint& b) {
        if (a.revenue != b.revenue) return a.revenue > b.revenue;
        return a.damage < b.damage;
    });
    // Union of the boxes [damage, ref_damage] x [ref_revenue, revenue],
    // swept from the highest revenue down.
    double volume = 0.0;
    double frontier_damage = ref_damage;
    for (const auto& p : pts) {
        if (p.revenue <= ref_revenue) break;
        if (p.damage >= frontier_damage) continue;
        volume += (frontier_damage - p.damage) * (p.revenue - ref_revenue);
        frontier_damage = p.damage;
    }
    return volume;
}

bool ParetoArchive::insert(ArchiveEntry entry) {
    if (!entry.optimality_tag) throw std::invalid_argument("archive accepts only lower-level optimal entries");
    const ObjectivePoint& p = entry.objectives;
    for (const auto& e : entries_) {
        if (dominates(e.objectives, p)) return false;
        if (e.objectives.revenue == p.revenue && e.objectives.damage == p.damage) return false;
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(p, e.objectives); });
    entries_.push_back(std::move(entry));
    return true;
}

std::vector<ObjectivePoint> ParetoArchive::objectives() const {
    std::vector<ObjectivePoint> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.objectives);
    return out;
}

std::vector<ArchiveEntry> ParetoArchive::sorted_by_damage() const {
    std::vector<ArchiveEntry> out = entries_;
    std::stable_sort(out.begin(), out.end(), [](const ArchiveEntry& a, const ArchiveEntry& b) {
        if (a.objectives.damage != b.objectives.damage) return a.objectives.damage < b.objectives.damage;
        return a.objectives.revenue < b.objectives.revenue;
    });
    return out;
}

std::vector<ObjectivePoint> nondominated_filter(std::span<const ObjectivePoint> points) {
    std::vector<ObjectivePoint> out;
    for (const auto& p : points) {
        bool keep = true;
        for (const auto& q : out) {
            if (dominates(q, p) || (q.revenue == p.revenue && q.damage == p.damage)) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        std::erase_if(out, [&](const ObjectivePoint& q) { return dominates(p, q); });
        out.push_back(p);
    }
    return out;
}

ObjectiveScale objective_scale(std::initializer_list<std::span<const ObjectivePoint>> sets) {
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    double dmin = rmin;
    double dmax = -rmin;
    for (const auto& s : sets) {
        for (const auto& p : s) {
            rmin = std::min(rmin, p.revenue);
            rmax = std::max(rmax, p.revenue);
            dmin = std::min(dmin, p.damage);
            dmax = std::max(dmax, p.damage);
        }
    }
    ObjectiveScale scale;
    if (rmax > rmin) scale.revenue_range = rmax - rmin;
    if (dmax > dmin) scale.damage_range = dmax - dmin;
    return scale;
}

double additive_epsilon(std::span<const ObjectivePoint> approx, std::span<const ObjectivePoint> target,
                        const ObjectiveScale& scale) {
    if (target.empty()) return 0.0;
    if (approx.empty()) return std::numeric_limits<double>::infinity();
    double eps = -std::numeric_limits<double>::infinity();
    for (const auto& t : target) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : approx) {
            const double need = std::max((t.revenue - a.revenue) / scale.revenue_range,
                                         (a.damage - t.damage) / scale.damage_range);
            best = std::min(best, need);
        }
        eps = std::max(eps, best);
    }
    return eps;
}

}  // namespace minetax
