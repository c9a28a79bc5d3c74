#ifndef MINETAX_REPORT_HPP
#define MINETAX_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "minetax/analytical.hpp"
#include "minetax/model.hpp"
#include "minetax/pareto.hpp"

// CSV output. Numbers carry 12 significant digits; periods and strata are
// numbered from 1 in files.
namespace minetax::report {

std::string format_number(double v);

void write_sweep_csv(std::ostream& os, const std::vector<analytical::WeightedSolution>& sweep);

/// id, technology, revenue, damage, profit, tau_1..tau_T, q_1..q_T
void write_frontier_csv(std::ostream& os, const std::vector<ArchiveEntry>& entries, std::size_t periods);

/// solution_id, technology, period, tau, q, period_profit,
/// cumulative_extraction, stratum
void write_schedule_csv(std::ostream& os, const std::vector<ArchiveEntry>& entries, const ExtendedModel& model);

struct FrontierRow {
    int id = 0;
    int technology = 0;
    ObjectivePoint objectives;
    std::vector<double> tau;
    std::vector<double> q;
};

/// Parses a file written by write_frontier_csv. Throws std::runtime_error on
/// a malformed header or row.
std::vector<FrontierRow> read_frontier_csv(std::istream& is);
std::vector<FrontierRow> read_frontier_csv(const std::filesystem::path& path);

/// Largest deviation between the objectives stored in a row and the ones
/// recomputed from its taxes and extractions, relative to max(1, |value|).
double reevaluation_error(const FrontierRow& row, const ExtendedModel& model);

}  // namespace minetax::report

#endif
