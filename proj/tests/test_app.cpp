#include <doctest.h>

#include <fstream>
#include <sstream>

#include "minetax/app.hpp"
#include "minetax/report.hpp"

using namespace minetax;
using doctest::Approx;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("minetax_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

app::RunConfig quick_extended(const std::string& name) {
    app::RunConfig c;
    c.pop_size = 16;
    c.generations = 8;
    c.out = scratch(name);
    return c;
}

}  // namespace

TEST_CASE("number formatting keeps 12 significant digits") {
    CHECK(report::format_number(612.5625) == "612.5625");
    CHECK(report::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(report::format_number(-0.0) == "0");
}

TEST_CASE("analytical sweep files") {
    app::RunConfig c;
    c.model = "analytical";
    c.out = scratch("sweep");
    std::ostringstream out, err;
    CHECK(app::run(c, out, err) == app::ok);
    const auto rows = lines(slurp(c.out / "sweep.csv"));
    REQUIRE(rows.size() == 101);
    CHECK(rows[0] == "w,tau,q,revenue,damage,profit");
    CHECK(rows[1].find("0.01,99,0,0,0,") == 0);
    CHECK(out.str().find("612.5625") != std::string::npos);

    c.points = 2;
    CHECK(app::run(c, out, err) == app::ok);
    CHECK(lines(slurp(c.out / "sweep.csv")).size() == 3);

    const auto bad = c.out / "bad.json";
    std::ofstream(bad) << R"({"analytical": {"alpha": 1, "beta": 1, "delta": 1, "gamma": 2, "phi": 0, "k": 1}})";
    c.config_path = bad;
    std::ostringstream err2;
    CHECK(app::run(c, out, err2) == app::usage_error);
    CHECK(err2.str().find("analytical.alpha") != std::string::npos);
}

TEST_CASE("extended run files") {
    auto c = quick_extended("extended");
    std::ostringstream out, err;
    REQUIRE(app::run(c, out, err) == app::ok);

    const auto rows = report::read_frontier_csv(c.out / "frontier.csv");
    REQUIRE_FALSE(rows.empty());
    const auto model = default_extended_model();
    for (const auto& r : rows) CHECK(report::reevaluation_error(r, model) <= 1e-9);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK_FALSE(dominates(rows[i].objectives, rows[i - 1].objectives));

    const auto schedule = lines(slurp(c.out / "schedule.csv"));
    CHECK(schedule.size() == 1 + 5 * rows.size());
    CHECK(schedule[0] == "solution_id,technology,period,tau,q,period_profit,cumulative_extraction,stratum");

    const auto meta = nlohmann::json::parse(slurp(c.out / "meta.json"));
    CHECK(config_from_json(meta["config"]) == default_config());
    CHECK(meta["run"]["seed"] == 1);
    CHECK(meta["generations_executed"] == 8);
    CHECK(meta["rows_written"] == rows.size());
    CHECK(meta["untagged_lower_solves"] == 0);
    CHECK(meta.contains("wall_time_seconds"));

    // same seed, same bytes
    const std::string first = slurp(c.out / "frontier.csv");
    REQUIRE(app::run(c, out, err) == app::ok);
    CHECK(slurp(c.out / "frontier.csv") == first);
}

TEST_CASE("objective bounds") {
    auto c = quick_extended("bounds");
    c.max_damage = 200.0;
    std::ostringstream out, err;
    REQUIRE(app::run(c, out, err) == app::ok);
    for (const auto& r : report::read_frontier_csv(c.out / "frontier.csv")) CHECK(r.objectives.damage <= 200.0);

    c.min_revenue = 1e9;
    CHECK(app::run(c, out, err) == app::empty_result);
    const auto text = lines(slurp(c.out / "frontier.csv"));
    REQUIRE(text.size() == 1);
    CHECK(text[0].find("id,technology,revenue,damage,profit") == 0);
}

TEST_CASE("usage errors") {
    std::ostringstream out, err;
    auto c = quick_extended("usage");
    c.tech = "9";
    CHECK(app::run(c, out, err) == app::usage_error);
    c.tech = "two";
    CHECK(app::run(c, out, err) == app::usage_error);
    c = quick_extended("usage");
    c.pop_size = 7;
    CHECK(app::run(c, out, err) == app::usage_error);
    c = quick_extended("usage");
    c.config_path = "/nonexistent/config.json";
    CHECK(app::run(c, out, err) == app::usage_error);
    c.verify = true;
    CHECK(app::run(c, out, err) == app::usage_error);
}

TEST_CASE("verification command") {
    std::ostringstream out, err;
    app::RunConfig c;
    c.verify = true;
    c.quick = true;
    CHECK(app::run(c, out, err) == app::ok);
    CHECK(out.str().find("FAIL") == std::string::npos);

    // non-convex purification cost
    auto j = to_json(default_config());
    j["extended"]["technologies"][3]["slopes"] = nlohmann::json::array({0.6, 0.5, 1.35, 2.025, 3.038});
    const auto dir = scratch("verify");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "nonconvex.json") << j.dump();
    c.config_path = dir / "nonconvex.json";
    std::ostringstream out2;
    CHECK(app::run(c, out2, err) == app::verification_failed);
    CHECK(out2.str().find("FAIL  convexity") != std::string::npos);

    // frontier files: a run compared with itself
    auto run = quick_extended("verify_files");
    run.tech = "1";
    REQUIRE(app::run(run, out, err) == app::ok);
    app::RunConfig v;
    v.verify = true;
    v.quick = true;
    v.frontier_combined = run.out / "frontier.csv";
    v.frontier_parts = {run.out / "frontier.csv"};
    std::ostringstream out3;
    CHECK(app::run(v, out3, err) == app::ok);
    CHECK(out3.str().find("frontier files") != std::string::npos);
}
