#include <doctest.h>

#include <limits>
#include <vector>

#include "minetax/pareto.hpp"
#include "minetax/variation.hpp"

using namespace minetax;
using doctest::Approx;

namespace {

ArchiveEntry entry(double revenue, double damage, bool tag = true) {
    return {{{1.0}}, {{1.0}, 1}, {revenue, damage, 0.0}, tag};
}

}  // namespace

TEST_CASE("dominance: more revenue, less damage") {
    CHECK(dominates({10, 5, 0}, {9, 5, 0}));
    CHECK(dominates({10, 4, 0}, {10, 5, 0}));
    CHECK_FALSE(dominates({10, 5, 0}, {10, 5, 0}));
    CHECK_FALSE(dominates({10, 5, 0}, {11, 6, 0}));
}

TEST_CASE("nondominated sort") {
    SUBCASE("identical points share one front") {
        const std::vector<ObjectivePoint> p(4, {3.0, 2.0, 0.0});
        const auto fronts = nondominated_sort(p);
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0] == std::vector<std::size_t>{0, 1, 2, 3});
    }
    SUBCASE("a trade-off staircase is one front") {
        const std::vector<ObjectivePoint> p{{1, 1, 0}, {4, 3, 0}, {2, 2, 0}, {5, 9, 0}};
        CHECK(nondominated_sort(p).size() == 1);
    }
    SUBCASE("a dominance chain gives singletons") {
        const std::vector<ObjectivePoint> p{{1, 5, 0}, {3, 3, 0}, {2, 4, 0}, {4, 2, 0}};
        const auto fronts = nondominated_sort(p);
        REQUIRE(fronts.size() == 4);
        CHECK(fronts[0] == std::vector<std::size_t>{3});
        CHECK(fronts[1] == std::vector<std::size_t>{1});
        CHECK(fronts[2] == std::vector<std::size_t>{2});
        CHECK(fronts[3] == std::vector<std::size_t>{0});
    }
    SUBCASE("property: fronts are internally nondominated and dominated from above") {
        Rng rng(31);
        std::vector<ObjectivePoint> p(200);
        for (auto& x : p) x = {uniform01(rng), uniform01(rng), 0.0};
        const auto fronts = nondominated_sort(p);
        std::size_t total = 0;
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            total += fronts[f].size();
            for (auto i : fronts[f]) {
                for (auto j : fronts[f]) CHECK_FALSE(dominates(p[i], p[j]));
                if (f == 0) continue;
                bool covered = false;
                for (auto j : fronts[f - 1]) covered = covered || dominates(p[j], p[i]);
                CHECK(covered);
            }
        }
        CHECK(total == p.size());
    }
}

TEST_CASE("crowding distance") {
    const std::vector<ObjectivePoint> p{{1, 1, 0}, {2, 2, 0}, {3, 3, 0}, {10, 10, 0}};
    const std::vector<std::size_t> front{0, 1, 2, 3};
    const auto d = crowding_distance(p, front);
    CHECK(d[0] == std::numeric_limits<double>::infinity());
    CHECK(d[3] == std::numeric_limits<double>::infinity());
    CHECK(d[1] == Approx(2.0 * 2.0 / 9.0));
    CHECK(d[2] == Approx(2.0 * 8.0 / 9.0));
}

TEST_CASE("hypervolume") {
    CHECK(hypervolume(std::vector<ObjectivePoint>{{10, 2, 0}}, 0.0, 10.0) == Approx(80.0));
    // two boxes: [2,10]x[0,10] and [1,10]x[0,4] overlap on [2,10]x[0,4]
    CHECK(hypervolume(std::vector<ObjectivePoint>{{10, 2, 0}, {4, 1, 0}}, 0.0, 10.0) == Approx(84.0));
    // dominated points add nothing
    CHECK(hypervolume(std::vector<ObjectivePoint>{{10, 2, 0}, {5, 5, 0}}, 0.0, 10.0) == Approx(80.0));
    CHECK(hypervolume(std::vector<ObjectivePoint>{}, 0.0, 10.0) == 0.0);
}

TEST_CASE("archive insertion") {
    ParetoArchive a;
    CHECK(a.insert(entry(100, 50)));
    CHECK(a.size() == 1);
    CHECK_FALSE(a.insert(entry(90, 60)));
    CHECK(a.size() == 1);
    CHECK(a.insert(entry(110, 40)));
    CHECK(a.size() == 1);
    CHECK(a.entries().front().objectives.revenue == 110.0);
    CHECK_FALSE(a.insert(entry(110, 40)));  // duplicate pair
    CHECK(a.size() == 1);
    CHECK(a.insert(entry(50, 10)));
    CHECK(a.size() == 2);
    CHECK_THROWS_AS(a.insert(entry(1000, 0, false)), std::invalid_argument);
}

TEST_CASE("property: random insertions keep the archive mutually nondominated") {
    Rng rng(32);
    ParetoArchive a;
    std::vector<ObjectivePoint> all;
    for (int i = 0; i < 500; ++i) {
        const ObjectivePoint p{uniform01(rng), uniform01(rng), 0.0};
        all.push_back(p);
        a.insert(entry(p.revenue, p.damage));
    }
    const auto objs = a.objectives();
    for (const auto& x : objs)
        for (const auto& y : objs) CHECK_FALSE(dominates(x, y));
    CHECK(objs.size() == nondominated_filter(all).size());
    const auto sorted = a.sorted_by_damage();
    for (std::size_t i = 1; i < sorted.size(); ++i) CHECK(sorted[i - 1].objectives.damage <= sorted[i].objectives.damage);
}

TEST_CASE("additive epsilon") {
    const std::vector<ObjectivePoint> a{{10, 1, 0}, {20, 5, 0}};
    const auto scale = objective_scale({a});
    CHECK(scale.revenue_range == 10.0);
    CHECK(scale.damage_range == 4.0);
    CHECK(additive_epsilon(a, a, scale) == Approx(0.0));
    const std::vector<ObjectivePoint> worse{{9, 1, 0}, {19, 5, 0}};
    CHECK(additive_epsilon(worse, a, scale) == Approx(0.1));
    CHECK(additive_epsilon(a, worse, scale) <= 0.0);
}
