#include <doctest.h>

#include <cmath>

#include "minetax/analytical.hpp"
#include "minetax/pareto.hpp"

using namespace minetax;
using namespace minetax::analytical;
using doctest::Approx;

TEST_CASE("follower best response") {
    const auto p = default_analytical_params();
    CHECK(follower_best_response(99.0, p) == 0.0);
    CHECK(follower_best_response(49.5, p) == Approx(12.375));
    CHECK(follower_best_response(150.0, p) == 0.0);
}

TEST_CASE("optimal tax") {
    auto p = default_analytical_params();
    CHECK(optimal_tax(1.0, p) == Approx(49.5));
    CHECK(optimal_tax(0.5, p) == Approx(50.0));
    CHECK_THROWS_AS(optimal_tax(0.0, p), DomainError);
    CHECK_THROWS_AS(optimal_tax(-0.2, p), DomainError);
    p.k = 0.0;
    for (double w : {0.05, 0.3, 1.0}) CHECK(optimal_tax(w, p) == Approx(49.5));
}

TEST_CASE("optimal extraction") {
    const auto p = default_analytical_params();
    CHECK(optimal_extraction(1.0, p) == Approx(12.375));
    CHECK(optimal_extraction(0.01, p) == Approx(0.0));
    CHECK(optimal_extraction(0.005, p) == 0.0);
    CHECK_THROWS_AS(optimal_extraction(0.0, p), DomainError);
}

TEST_CASE("feasibility threshold") {
    auto p = default_analytical_params();
    CHECK(std::abs(feasibility_threshold(p) - 0.01) <= 1e-12);
    p.k = 9.0;
    CHECK(feasibility_threshold(p) == Approx(9.0 / 108.0));
    p.k = 0.0;
    CHECK(feasibility_threshold(p) == 0.0);
    p = default_analytical_params();
    p.gamma = 100.0;
    CHECK_THROWS_AS(feasibility_threshold(p), DomainError);
}

TEST_CASE("sweep endpoints and shape") {
    const auto p = default_analytical_params();
    const auto two = pareto_sweep(p, 2);
    REQUIRE(two.size() == 2);
    CHECK(two.front().w == Approx(0.01));
    CHECK(std::abs(two.front().revenue) <= 1e-9);
    CHECK(std::abs(two.front().damage) <= 1e-9);
    CHECK(std::abs(two.back().revenue - 612.5625) <= 1e-9);
    CHECK(std::abs(two.back().damage - 12.375) <= 1e-9);
    CHECK_THROWS_AS(pareto_sweep(p, 1), DomainError);

    const auto sweep = pareto_sweep(p, 200);
    REQUIRE(sweep.size() == 200);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const auto& s = sweep[i];
        CHECK(s.revenue == Approx(s.tau_star * s.q_star));
        CHECK(s.damage == Approx(p.k * s.q_star));
        CHECK(s.profit == Approx(follower_profit(s.q_star, s.tau_star, p)));
        CHECK(s.profit >= 0.0);
        if (i == 0) continue;
        const auto& prev = sweep[i - 1];
        CHECK(prev.w <= s.w);
        CHECK(prev.damage <= s.damage);
        CHECK(prev.revenue <= s.revenue);
        const ObjectivePoint a{prev.revenue, prev.damage, 0.0};
        const ObjectivePoint b{s.revenue, s.damage, 0.0};
        CHECK_FALSE(dominates(a, b));
        CHECK_FALSE(dominates(b, a));
    }
}

TEST_CASE("property: first-order conditions and consistency") {
    const auto p = default_analytical_params();
    const double h = 1e-4;
    for (int i = 0; i <= 200; ++i) {
        const double w = feasibility_threshold(p) + 1e-3 + (1.0 - feasibility_threshold(p) - 1e-3) * i / 200.0;
        const double tau = optimal_tax(w, p);
        const double q = optimal_extraction(w, p);
        CHECK(std::abs(follower_best_response(tau, p) - q) <= 1e-9);
        const double follower = (follower_profit(q + h, tau, p) - follower_profit(q - h, tau, p)) / (2 * h);
        const double leader = (scalarized_objective(tau + h, w, p) - scalarized_objective(tau - h, w, p)) / (2 * h);
        CHECK(std::abs(follower) <= 1e-6);
        CHECK(std::abs(leader) <= 1e-6);
    }
    for (double tau = 0.0; tau < 99.0; tau += 0.37) {
        const double q = follower_best_response(tau, p);
        CHECK(std::abs((follower_profit(q + h, tau, p) - follower_profit(q - h, tau, p)) / (2 * h)) <= 1e-6);
    }
}
