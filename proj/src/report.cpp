#include "minetax/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace minetax::report {

std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<analytical::WeightedSolution>& sweep) {
    os << "w,tau,q,revenue,damage,profit\n";
    for (const auto& s : sweep)
        os << format_number(s.w) << ',' << format_number(s.tau_star) << ',' << format_number(s.q_star) << ','
           << format_number(s.revenue) << ',' << format_number(s.damage) << ',' << format_number(s.profit) << '\n';
}

void write_frontier_csv(std::ostream& os, const std::vector<ArchiveEntry>& entries, std::size_t periods) {
    os << "id,technology,revenue,damage,profit";
    for (std::size_t t = 1; t <= periods; ++t) os << ",tau_" << t;
    for (std::size_t t = 1; t <= periods; ++t) os << ",q_" << t;
    os << '\n';
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        os << i + 1 << ',' << e.response.tech_id << ',' << format_number(e.objectives.revenue) << ','
           << format_number(e.objectives.damage) << ',' << format_number(e.objectives.profit);
        for (double v : e.strategy.tau) os << ',' << format_number(v);
        for (double v : e.response.q) os << ',' << format_number(v);
        os << '\n';
    }
}

void write_schedule_csv(std::ostream& os, const std::vector<ArchiveEntry>& entries, const ExtendedModel& model) {
    os << "solution_id,technology,period,tau,q,period_profit,cumulative_extraction,stratum\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        const TechParams& tech = model.tech(e.response.tech_id);
        double cum = 0.0;
        for (std::size_t t = 0; t < e.response.q.size(); ++t) {
            cum += e.response.q[t];
            const double pi = period_profit(t, std::span(e.response.q).first(t + 1), e.strategy.tau[t], tech, model);
            os << i + 1 << ',' << tech.id << ',' << t + 1 << ',' << format_number(e.strategy.tau[t]) << ','
               << format_number(e.response.q[t]) << ',' << format_number(pi) << ',' << format_number(cum) << ','
               << model.strata.stratum_of(cum) + 1 << '\n';
        }
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, std::size_t line) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw std::runtime_error("frontier csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<FrontierRow> read_frontier_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("frontier csv: missing header");
    const auto header = split(line);
    if (header.size() < 5 || (header.size() - 5) % 2 != 0 || header[0] != "id" || header[1] != "technology" ||
        header[2] != "revenue" || header[3] != "damage" || header[4] != "profit")
        throw std::runtime_error("frontier csv: unexpected header");
    const std::size_t T = (header.size() - 5) / 2;
    std::vector<FrontierRow> rows;
    for (std::size_t n = 2; std::getline(is, line); ++n) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw std::runtime_error("frontier csv line " + std::to_string(n) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        FrontierRow r;
        r.id = static_cast<int>(to_double(cells[0], n));
        r.technology = static_cast<int>(to_double(cells[1], n));
        r.objectives = {to_double(cells[2], n), to_double(cells[3], n), to_double(cells[4], n)};
        for (std::size_t t = 0; t < T; ++t) r.tau.push_back(to_double(cells[5 + t], n));
        for (std::size_t t = 0; t < T; ++t) r.q.push_back(to_double(cells[5 + T + t], n));
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<FrontierRow> read_frontier_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_frontier_csv(in);
}

double reevaluation_error(const FrontierRow& row, const ExtendedModel& model) {
    if (!model.has_tech(row.technology) || row.q.size() != model.periods())
        return std::numeric_limits<double>::infinity();
    const ObjectivePoint p = leader_objectives({row.q, row.technology}, {row.tau}, model);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    return std::max({rel(row.objectives.revenue, p.revenue), rel(row.objectives.damage, p.damage),
                     rel(row.objectives.profit, p.profit)});
}

}  // namespace minetax::report
