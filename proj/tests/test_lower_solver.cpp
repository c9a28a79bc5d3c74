#include <doctest.h>

#include <cmath>
#include <vector>

#include "minetax/lower_solver.hpp"
#include "minetax/oracle.hpp"
#include "minetax/variation.hpp"

using namespace minetax;
using doctest::Approx;

namespace {

const ExtendedModel& gold() {
    static const ExtendedModel m = default_extended_model();
    return m;
}

LeaderStrategy random_strategy(Rng& rng, const ExtendedModel& m, double scale = 1.0) {
    LeaderStrategy s;
    for (const auto& b : m.tau_bounds) s.tau.push_back(b.lower + scale * uniform01(rng) * (b.upper - b.lower));
    return s;
}

}  // namespace

TEST_CASE("golden section returns interior and boundary maxima") {
    CHECK(golden_section_max([](double x) { return -(x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-10) == Approx(2.0));
    CHECK(golden_section_max([](double x) { return -x; }, 0.0, 5.0, 1e-10) == 0.0);
    CHECK(golden_section_max([](double x) { return x; }, 0.0, 5.0, 1e-10) == 5.0);
}

TEST_CASE("prohibitive taxes shut the mine and pick the cheapest idle technology") {
    const auto& m = gold();
    const LeaderStrategy prohibitive{m.alpha};
    for (const auto& tech : m.techs) {
        const auto r = best_response_fixed_tech(prohibitive, tech, m);
        CHECK(r.optimality_tag);
        for (double q : r.response.q) CHECK(q == 0.0);
        CHECK(r.profit == Approx(-5.0 * tech.gamma_er));
    }
    const auto r = best_response(prohibitive, m);
    CHECK(r.response.tech_id == 3);  // ties with technology 4; both leave (0, 0) to the leader
    CHECK(r.profit == Approx(-25.0));
}

TEST_CASE("zero taxes agree with the grid oracle") {
    const auto& m = gold();
    const LeaderStrategy zero{std::vector<double>(5, 0.0)};
    const auto mine = best_response_fixed_tech(zero, m.tech(1), m);
    ExtendedModel only1 = m;
    only1.techs = {m.tech(1)};
    const auto ref = oracle::grid_best_response(zero, only1, oracle::response_grid_within(zero, only1, 2e6));
    CHECK(mine.profit == Approx(ref.profit).epsilon(1e-9));
    for (std::size_t t = 0; t < 5; ++t) CHECK(std::abs(mine.response.q[t] - ref.response.q[t]) <= 1e-3);

    const auto all = best_response(zero, m);
    const auto all_ref = oracle::grid_best_response(zero, m, oracle::response_grid_within(zero, m, 2e6));
    CHECK(all.response.tech_id == all_ref.response.tech_id);
    CHECK(std::abs(all.profit - all_ref.profit) <= 1e-2);
}

TEST_CASE("two periods with linear purification cost decouple") {
    ExtendedModel m;
    m.alpha = {50.0, 60.0};
    m.beta = {0.1, 0.2};
    m.strata = StrataTable({1000.0});
    m.techs = {TechParams{1, 2.0, 0.5, 3.0, 0.0, {2.0}}};
    m.fill_default_bounds();
    m.validate();
    const TechParams& tech = m.techs.front();
    for (const auto& tau : {std::vector<double>{5.0, 10.0}, std::vector<double>{0.0, 0.0}, std::vector<double>{48.0, 20.0}}) {
        const auto r = best_response_fixed_tech({tau}, tech, m);
        CHECK(r.optimality_tag);
        for (std::size_t t = 0; t < 2; ++t) {
            const double expected =
                std::max(0.0, (m.alpha[t] - tech.beta_er - tech.slopes[0] - tau[t]) / (2.0 * (m.beta[t] + tech.alpha_er)));
            CHECK(r.response.q[t] == Approx(expected).epsilon(1e-7));
        }
    }
}

TEST_CASE("single-technology model equals the fixed-technology solve") {
    ExtendedModel m = gold();
    m.techs = {gold().tech(2)};
    Rng rng(21);
    for (int i = 0; i < 10; ++i) {
        const auto s = random_strategy(rng, m, 0.6);
        const auto a = best_response(s, m);
        const auto b = best_response_fixed_tech(s, m.techs.front(), m);
        CHECK(a.response == b.response);
        CHECK(a.profit == b.profit);
    }
}

TEST_CASE("property: solutions are stationary and unique") {
    const auto& m = gold();
    Rng rng(22);
    for (int i = 0; i < 40; ++i) {
        const auto s = random_strategy(rng, m, 0.7);
        const auto& tech = m.techs[static_cast<std::size_t>(i % 4)];
        const auto r = best_response_fixed_tech(s, tech, m);
        CHECK(r.optimality_tag);
        CHECK(is_stationary(r.response.q, s.tau, tech, m));
        std::vector<double> start(5);
        for (std::size_t t = 0; t < 5; ++t) start[t] = uniform01(rng) * m.q_bounds[t].upper * 0.3;
        const auto other = coordinate_ascent(s.tau, tech, m, start);
        for (std::size_t t = 0; t < 5; ++t) CHECK(std::abs(other.q[t] - r.response.q[t]) <= 1e-5);
    }
    // a schedule well away from the optimum is not stationary
    const LeaderStrategy zero{std::vector<double>(5, 0.0)};
    CHECK_FALSE(is_stationary(std::vector<double>(5, 1.0), zero.tau, m.tech(1), m));
}

TEST_CASE("property: raising a tax never raises the follower's profit; zero tax dominates") {
    const auto& m = gold();
    Rng rng(23);
    const double untaxed = best_response({std::vector<double>(5, 0.0)}, m).profit;
    for (int i = 0; i < 30; ++i) {
        auto s = random_strategy(rng, m, 0.6);
        const double before = best_response(s, m).profit;
        CHECK(before <= untaxed + 1e-9);
        const auto t = static_cast<std::size_t>(i % 5);
        s.tau[t] = std::min(m.tau_bounds[t].upper, s.tau[t] + 5.0 * uniform01(rng));
        CHECK(best_response(s, m).profit <= before + 1e-9);
    }
}

TEST_CASE("leader-friendly tie breaking") {
    const auto& m = gold();
    const LeaderStrategy s{std::vector<double>(5, 10.0)};
    BestResponse low{{std::vector<double>(5, 1.0), 1}, 100.0, true};
    BestResponse high{{std::vector<double>(5, 2.0), 1}, 100.0, true};
    // same technology, more extraction: more revenue and more damage -> revenue wins
    CHECK(prefer_response(high, low, s, m));
    CHECK_FALSE(prefer_response(low, high, s, m));
    // equal objectives: lower technology id
    BestResponse a{{std::vector<double>(5, 0.0), 4}, -25.0, true};
    BestResponse b{{std::vector<double>(5, 0.0), 3}, -25.0, true};
    CHECK(prefer_response(b, a, s, m));
    // a clear profit gap overrides the leader
    BestResponse better{{std::vector<double>(5, 1.0), 1}, 100.5, true};
    CHECK(prefer_response(better, high, s, m));
    // same revenue, less damage
    BestResponse clean{{std::vector<double>(5, 2.0), 2}, 100.0, true};
    CHECK(prefer_response(clean, BestResponse{{std::vector<double>(5, 2.0), 3}, 100.0, true}, s, m));
}

TEST_CASE("evolutionary lower level") {
    const auto& m = gold();
    Rng rng(24);
    LowerEaConfig cfg;
    cfg.seed = 5;
    for (int i = 0; i < 8; ++i) {
        const auto s = random_strategy(rng, m, 0.6);
        const auto det = best_response(s, m);
        const auto ea = best_response_ea(s, m, cfg);
        CHECK(ea.optimality_tag);
        CHECK(std::abs(ea.profit - det.profit) <= 1e-3 * std::max(1.0, std::abs(det.profit)));
        const auto again = best_response_ea(s, m, cfg);
        CHECK(again.response == ea.response);
        CHECK(again.profit == ea.profit);
    }

    // no generations: plain coordinate ascent from the injected start
    const LeaderStrategy s{{10.0, 12.0, 14.0, 16.0, 18.0}};
    const std::vector<double> start{3.0, 1.0, 4.0, 1.0, 5.0};
    LowerEaConfig none;
    none.generations = 0;
    none.start = start;
    ExtendedModel only = m;
    only.techs = {m.tech(3)};
    const auto ea = best_response_ea(s, only, none);
    const auto ca = coordinate_ascent(s.tau, m.tech(3), only, start);
    CHECK(ea.response.q == ca.q);
    CHECK(ea.profit == ca.profit);
}
