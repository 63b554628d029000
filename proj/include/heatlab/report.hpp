#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatlab/estimates.hpp"
#include "heatlab/isoperimetry.hpp"
#include "heatlab/potential.hpp"

namespace heatlab {

/// "heatlab <version>", embedded in every report.
std::string version_string();

/// {"center", "E": [E(x,0), ...], "beta", "beta_prime", "q"} plus the local slopes.
nlohmann::json profile_to_json(const ExitProfile &profile);

/// One line of summary.csv.
struct SummaryRow {
    std::string check;
    double statistic = 0.0;
    double fitted_C = 0.0;
    double fitted_c = 0.0;
    bool pass = false;
    /// Non-empty when the check threw.
    std::string error;
};

SummaryRow summarize(const EstimateReport &report);
SummaryRow summarize(const InequalityReport &report);

/// Columns: check,statistic,fitted_C,fitted_c,pass,error. Numbers use round-trip precision.
void write_summary_csv(const std::vector<SummaryRow> &rows, const std::filesystem::path &path);

/// Adds "version" to a report document.
nlohmann::json stamped(nlohmann::json report);

} // namespace heatlab
