#include <doctest.h>

#include <set>

#include "minetax/bilevel.hpp"
#include "minetax/oracle.hpp"

using namespace minetax;
using doctest::Approx;

namespace {

const ExtendedModel& gold() {
    static const ExtendedModel m = default_extended_model();
    return m;
}

EaConfig small(int pop, int gens, std::uint64_t seed = 3) {
    EaConfig c;
    c.population_size = pop;
    c.max_generations = gens;
    c.seed = seed;
    return c;
}

void check_archive_sound(const ParetoArchive& archive, const ExtendedModel& m) {
    const auto& e = archive.entries();
    for (const auto& a : e) {
        CHECK(a.optimality_tag);
        const auto p = leader_objectives(a.response, a.strategy, m);
        CHECK(p.revenue == a.objectives.revenue);
        CHECK(p.damage == a.objectives.damage);
        CHECK(p.profit == a.objectives.profit);
        for (const auto& b : e) CHECK_FALSE(dominates(a.objectives, b.objectives));
    }
}

}  // namespace

TEST_CASE("configuration checks") {
    CHECK_NOTHROW(EaConfig{}.validate());
    CHECK_THROWS_AS(small(7, 10).validate(), DomainError);
    CHECK_THROWS_AS(small(2, 10).validate(), DomainError);
    auto c = small(10, 10);
    c.crossover_rate = 1.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK(parse_lower_mode("ea") == LowerMode::ea);
    CHECK(parse_tech_choice(to_string(TechChoice::follower)) == TechChoice::follower);
    CHECK_THROWS_AS(parse_tech_choice("regulator"), DomainError);
}

TEST_CASE("identical population without variation archives a single point") {
    auto c = small(10, 5);
    c.crossover_rate = 0.0;
    c.mutation_rate = 0.0;
    c.initial_population.assign(10, UpperGenome{{{20.0, 25.0, 30.0, 35.0, 40.0}}, 2});
    const auto r = evolve(gold(), c, 2);
    REQUIRE(r.archive.size() == 1);
    CHECK(r.archive.entries().front().strategy.tau == std::vector<double>{20.0, 25.0, 30.0, 35.0, 40.0});
}

TEST_CASE("archive soundness, progress and reproducibility") {
    const auto a = evolve(gold(), small(20, 25));
    const auto b = evolve(gold(), small(20, 25));
    check_archive_sound(a.archive, gold());
    REQUIRE(a.archive.size() == b.archive.size());
    for (std::size_t i = 0; i < a.archive.size(); ++i) {
        CHECK(a.archive.entries()[i].strategy == b.archive.entries()[i].strategy);
        CHECK(a.archive.entries()[i].response == b.archive.entries()[i].response);
    }
    CHECK(a.untagged == 0);
    CHECK(a.hypervolume_history.size() == static_cast<std::size_t>(a.generations) + 1);
    for (std::size_t i = 1; i < a.hypervolume_history.size(); ++i)
        CHECK(a.hypervolume_history[i] >= a.hypervolume_history[i - 1]);

    auto threaded = small(20, 25);
    threaded.threads = 3;
    const auto t = evolve(gold(), threaded);
    REQUIRE(t.archive.size() == a.archive.size());
    for (std::size_t i = 0; i < t.archive.size(); ++i)
        CHECK(t.archive.entries()[i].response == a.archive.entries()[i].response);
}

TEST_CASE("hypervolume stagnation stops the run") {
    auto c = small(10, 500);
    c.crossover_rate = 0.0;
    c.mutation_rate = 0.0;
    c.stagnation_window = 5;
    const auto r = evolve(gold(), c, 1);
    CHECK(r.stagnated);
    CHECK(r.generations == 5);
}

TEST_CASE("evolutionary lower level inside the loop") {
    auto c = small(10, 4);
    c.lower_mode = LowerMode::ea;
    c.lower_ea.population_size = 10;
    c.lower_ea.generations = 5;
    const auto r = evolve(gold(), c, 3);
    CHECK_FALSE(r.archive.empty());
    check_archive_sound(r.archive, gold());
}

TEST_CASE("technology choice") {
    SUBCASE("leader: several technologies reach the combined frontier") {
        const auto r = evolve(gold(), small(40, 40));
        std::set<int> techs;
        for (const auto& e : r.archive.entries()) techs.insert(e.response.tech_id);
        CHECK(techs.size() >= 2);
    }
    SUBCASE("follower: the cheapest technology takes every producing response") {
        auto c = small(20, 20);
        c.tech_choice = TechChoice::follower;
        const auto r = evolve(gold(), c);
        for (const auto& e : r.archive.entries()) {
            double total = 0.0;
            for (double q : e.response.q) total += q;
            if (total > 0.0) CHECK(e.response.tech_id == 4);
        }
    }
    SUBCASE("a technology filter is respected") {
        const auto r = evolve(gold(), small(10, 5), 2);
        for (const auto& e : r.archive.entries()) CHECK(e.response.tech_id == 2);
    }
}

TEST_CASE("strata kinks") {
    // One period, two strata of 20: slope 1 then 3. Revenue climbs with
    // damage and drops when extraction passes 20.
    ExtendedModel m;
    m.alpha = {100.0};
    m.beta = {1.0};
    m.strata = StrataTable({20.0, 20.0});
    m.techs = {TechParams{1, 1.0, 0.5, 0.0, 0.0, {1.0, 3.0}}};
    m.fill_default_bounds();
    std::vector<ArchiveEntry> f;
    auto add = [&](double q, double revenue) { f.push_back({{{1.0}}, {{q}, 1}, {revenue, q, 0.0}, true}); };
    for (int i = 0; i <= 19; ++i) add(i, 10.0 * i);
    add(21.0, 191.0);
    add(25.0, 210.0);
    add(30.0, 230.0);
    const auto kinks = detect_strata_kinks(f, m);
    REQUIRE(kinks.size() == 1);
    CHECK(kinks.front().breakpoint == 20.0);
    CHECK(kinks.front().left == 19);

    // a straight line through the breakpoint is not a kink
    std::vector<ArchiveEntry> line;
    for (int i = 0; i <= 30; ++i) line.push_back({{{1.0}}, {{double(i)}, 1}, {10.0 * i, double(i), 0.0}, true});
    CHECK(detect_strata_kinks(line, m).empty());

    // the end of the stock is not a kink: the last slope carries on
    m.techs.front().slopes = {1.0, 1.0};
    CHECK(detect_strata_kinks(f, m).empty());
}

TEST_CASE("single-technology frontiers show strata kinks") {
    const auto r = evolve(gold(), small(40, 100), 1);
    CHECK_FALSE(detect_strata_kinks(r.archive.sorted_by_damage(), gold()).empty());
}
