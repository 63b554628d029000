#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "heatlab/error.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/presets.hpp"
#include "heatlab/report.hpp"

using namespace heatlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("heatlab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Presets, Names) {
    EXPECT_EQ(preset_names(), (std::vector<std::string>{"lattice-z1", "paper-section-5"}));
    for (const auto &name : preset_names())
        EXPECT_EQ(find_preset(name).name, name);
    try {
        find_preset("no-such-preset");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownPreset);
    }
    EXPECT_THROW(run_preset("no-such-preset", scratch("unknown")), Error);
}

TEST(Presets, GraphSpecs) {
    EXPECT_EQ(graph_from_spec({{"family", "lattice"}, {"dim", 2}, {"side", 5}}).vertex_count(), 25u);
    EXPECT_EQ(graph_from_spec({{"family", "vicsek"}, {"level", 1}}).vertex_count(), 21u);
    EXPECT_EQ(graph_from_spec({{"family", "stretched_vicsek"}, {"level", 1}}).vertex_count(), 37u);
    EXPECT_EQ(graph_from_spec({{"family", "weighted_vicsek"}, {"level", 1}, {"weights", {1, 3}}}).total_measure(),
              weighted_vicsek(1, {1, 3}).total_measure());
    EXPECT_THROW(graph_from_spec({{"family", "hypercube"}}), Error);
}

TEST(Presets, LatticeRunWritesEverything) {
    const fs::path dir = scratch("lattice");
    const PresetOutcome o = run_preset("lattice-z1", dir);
    EXPECT_EQ(o.exit_code, 0);
    ASSERT_EQ(o.rows.size(), 9u);
    for (const SummaryRow &row : o.rows) {
        EXPECT_TRUE(row.pass) << row.check;
        EXPECT_TRUE(row.error.empty()) << row.error;
        const auto report = nlohmann::json::parse(slurp(dir / ("report_" + row.check + ".json")));
        EXPECT_EQ(report.at("version"), version_string());
        EXPECT_TRUE(report.at("pass").get<bool>());
    }

    const std::string csv = slurp(dir / "summary.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "check,statistic,fitted_C,fitted_c,pass,error");
    int rows = 0;
    for (std::string line; std::getline(lines, line); ++rows)
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5) << line;
    EXPECT_EQ(rows, 9);

    // The stored graph reloads to the same graph.
    const WeightedGraph g = read_graph(dir / "graph.json");
    EXPECT_EQ(graph_to_json(g).dump(), graph_to_json(lattice_box(1, 2001)).dump());
    const auto profile = nlohmann::json::parse(slurp(dir / "profile.json"));
    EXPECT_EQ(profile.at("E").size(), 65u);
    EXPECT_NEAR(profile.at("beta").get<double>(), 2.0, 0.1);
}

TEST(Presets, RunsAreReproducible) {
    const fs::path a = scratch("repro_a"), b = scratch("repro_b");
    run_preset("lattice-z1", a);
    run_preset("lattice-z1", b);
    for (const auto &entry : fs::directory_iterator(a))
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path().filename();
}

TEST(Report, SummaryFormatting) {
    EstimateReport r;
    r.check_name = "due";
    r.sup_statistic = 0.1;
    r.fitted_C = 0.1;
    r.pass = true;
    const SummaryRow row = summarize(r);
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    write_summary_csv({row}, dir / "s.csv");
    EXPECT_EQ(slurp(dir / "s.csv"), "check,statistic,fitted_C,fitted_c,pass,error\ndue,0.1,0.1,nan,true,\n");
    EXPECT_EQ(stamped(nlohmann::json::object()).at("version"), "heatlab 0.1.0");
}
