#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatlab/graph.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

/// A named check inside a preset. `run` returns the full report document.
struct PresetCheck {
    std::string name;
    std::function<nlohmann::json(const WeightedGraph &, SummaryRow &)> run;
};

/// Everything a run needs: the graph recipe, the profile to record and the checks.
struct ExperimentPreset {
    std::string name;
    std::string description;
    nlohmann::json graph_spec;
    int profile_rmax = 0;
    std::vector<PresetCheck> checks;
};

/// Builds a graph from {"family": "lattice"|"vicsek"|"weighted_vicsek"|"stretched_vicsek", ...}.
WeightedGraph graph_from_spec(const nlohmann::json &spec);

std::vector<std::string> preset_names();
/// Throws UnknownPreset.
ExperimentPreset find_preset(const std::string &name);

struct PresetOutcome {
    int exit_code = 0;
    std::vector<SummaryRow> rows;
};

/// Writes graph.json, profile.json, report_<check>.json per check and summary.csv
/// into out_dir. Exit code 1 if a check threw, or under `strict` if a check did
/// not pass. Unknown names throw UnknownPreset.
PresetOutcome run_preset(const std::string &name, const std::filesystem::path &out_dir, bool strict = false);

} // namespace heatlab
