#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "heatlab/error.hpp"
#include "heatlab/estimates.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/isoperimetry.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/montecarlo.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/potential.hpp"
#include "heatlab/presets.hpp"
#include "heatlab/report.hpp"
#include "heatlab/spectral.hpp"
#include "heatlab/subsets.hpp"

using namespace heatlab;
using nlohmann::json;

namespace {

struct Globals {
    std::string graph;
    std::string out;
    std::uint64_t seed = 7;
    int threads = 1;
    double q = 1.0;
    int ball_factor = 3;
    bool strict = false;
};

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, sep);)
        parts.push_back(item);
    return parts;
}

template <class T> T parse_number(const std::string &s) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorKind::BadParameter, "not a number: '" + s + "'");
    return v;
}

// ball:x:R or ids:a,b,c
VertexSet parse_set(const WeightedGraph &g, const std::string &spec) {
    const auto parts = split(spec, ':');
    if (parts.size() == 3 && parts[0] == "ball")
        return ball(g, parse_number<VertexId>(parts[1]), parse_number<int>(parts[2]));
    if (parts.size() == 2 && parts[0] == "ids") {
        std::vector<VertexId> ids;
        for (const auto &p : split(parts[1], ','))
            ids.push_back(parse_number<VertexId>(p));
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (VertexId v : ids)
            if (!g.contains(v))
                throw Error(ErrorKind::InvalidVertex, "vertex " + std::to_string(v) + " not in graph");
        return VertexSet(std::move(ids));
    }
    throw Error(ErrorKind::BadParameter, "set must be ball:x:R or ids:a,b,...");
}

// a:b:step
std::vector<double> parse_grid(const std::string &spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3)
        throw Error(ErrorKind::BadParameter, "grid must be first:last:step");
    return delta_grid(parse_number<double>(parts[0]), parse_number<double>(parts[1]), parse_number<double>(parts[2]));
}

std::vector<std::pair<VertexId, VertexId>> parse_pairs(const std::vector<std::string> &items) {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (const auto &item : items) {
        const auto p = split(item, '-');
        if (p.size() != 2)
            throw Error(ErrorKind::BadParameter, "pair must be x-y");
        out.emplace_back(parse_number<VertexId>(p[0]), parse_number<VertexId>(p[1]));
    }
    return out;
}

std::string format(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void emit_json(const json &doc, const std::string &out) {
    if (out.empty())
        std::cout << doc.dump(2) << '\n';
    else
        write_json(doc, out);
}

WeightedGraph load(const Globals &g) {
    if (g.graph.empty())
        throw Error(ErrorKind::BadParameter, "--graph is required");
    return read_graph(g.graph);
}

Horizon parse_horizon(const std::string &s) {
    if (s == "exact")
        return Horizon::Exact;
    if (s == "finite")
        return Horizon::FiniteGraph;
    throw Error(ErrorKind::BadParameter, "horizon must be exact or finite");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Heat kernel, exit time and isoperimetry checks on weighted graphs"};
    app.require_subcommand(1);
    Globals G;
    app.add_option("--graph", G.graph, "Graph JSON");
    app.add_option("--out", G.out, "Output file or directory");
    app.add_option("--seed", G.seed, "Random seed");
    app.add_option("--threads", G.threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--q", G.q, "Constant q in the sub-Gaussian kernel");
    app.add_option("--ball-factor", G.ball_factor, "Normalising ball B(x, factor R)");
    app.add_flag("--strict", G.strict, "Exit 1 when a check does not pass");

    // gen
    auto *gen = app.add_subcommand("gen", "Generate a graph")->fallthrough();
    std::string family;
    int level = 0, dim = 1, side = 0;
    std::vector<double> weights;
    gen->add_option("--family", family, "lattice | vicsek | weighted_vicsek | stretched_vicsek")->required();
    gen->add_option("--level", level);
    gen->add_option("--dim", dim);
    gen->add_option("--side", side);
    gen->add_option("--weights", weights)->delimiter(',');

    // kernel
    auto *kern = app.add_subcommand("kernel", "Heat kernel row p_n(x, .) as CSV")->fallthrough();
    VertexId source = 0;
    int time = 0;
    std::string killed, horizon = "exact";
    kern->add_option("--source", source)->required();
    kern->add_option("--time", time)->required();
    kern->add_option("--killed", killed, "Kill the walk outside ball:x:R or ids:...");
    kern->add_option("--horizon", horizon, "exact | finite");

    // lambda
    auto *lam = app.add_subcommand("lambda", "Smallest Dirichlet eigenvalue")->fallthrough();
    std::string set_spec;
    lam->add_option("--set", set_spec)->required();

    // profile
    auto *prof = app.add_subcommand("profile", "Exit-time profile E(x, R)")->fallthrough();
    VertexId center = 0;
    int rmax = 0;
    prof->add_option("--center", center);
    prof->add_option("--rmax", rmax)->required();

    // sim
    auto *sim = app.add_subcommand("sim", "Monte Carlo cross-checks")->fallthrough();
    std::string sim_kind;
    int radius = 1;
    long trials = 10000;
    sim->add_option("kind", sim_kind, "exit | tail")->required()->check(CLI::IsMember({"exit", "tail"}));
    sim->add_option("--center", center);
    sim->add_option("--radius", radius)->required();
    sim->add_option("--time", time);
    sim->add_option("--trials", trials);

    // verify
    auto *ver = app.add_subcommand("verify", "Run one inequality check")->fallthrough();
    std::string check;
    std::string delta_spec = "0.1:1.5:0.1";
    int max_exhaustive = 12, samples = 200;
    std::vector<VertexId> centers;
    std::vector<long> times;
    std::vector<int> radii;
    std::vector<std::string> pairs, set_pairs;
    std::vector<double> eps_grid{0.25, 0.5, 1.0};
    long n_max = 100;
    double c = 0.0;
    std::optional<double> beta;
    ver->add_option("check", check)
        ->required()
        ->check(CLI::IsMember({"fk", "e", "rho", "pcycle", "corollary", "due", "ue", "dg", "tail", "pmv", "mv", "tc",
                               "lvv", "twostep"}));
    ver->add_option("--center", center);
    ver->add_option("--radius", radius);
    ver->add_option("--delta-grid", delta_spec);
    ver->add_option("--max-exhaustive", max_exhaustive);
    ver->add_option("--samples", samples);
    ver->add_option("--centers", centers)->delimiter(',');
    ver->add_option("--times", times, "Time grid")->delimiter(',');
    ver->add_option("--radii", radii)->delimiter(',');
    ver->add_option("--pairs", pairs, "Vertex pairs x-y")->delimiter(',');
    ver->add_option("--set-pairs", set_pairs, "Set pairs A/B, e.g. ball:3:2/ball:20:2");
    ver->add_option("--eps-grid", eps_grid)->delimiter(',');
    ver->add_option("--n-max", n_max);
    int max_points = 0;
    ver->add_option("--max-points", max_points, "tc: cap on the points y per ball (0 = all)");
    ver->add_option("--c", c, "Exponent constant c");
    ver->add_option("--beta", beta);
    ver->add_option("--horizon", horizon, "exact | finite");

    // run-preset
    auto *pre = app.add_subcommand("run-preset", "Run a named experiment")->fallthrough();
    std::string preset;
    pre->add_option("name", preset)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        set_default_threads(G.threads);
        if (*gen) {
            json spec = {{"family", family}};
            if (family == "lattice")
                spec.update({{"dim", dim}, {"side", side}});
            else
                spec["level"] = level;
            if (!weights.empty())
                spec["weights"] = weights;
            const WeightedGraph g = graph_from_spec(spec);
            emit_json(graph_to_json(g), G.out);
        } else if (*kern) {
            const WeightedGraph g = load(G);
            const KernelSlice s = killed.empty() ? heat_kernel(g, source, time, parse_horizon(horizon))
                                                 : killed_kernel(g, parse_set(g, killed), source, time);
            std::ofstream file;
            if (!G.out.empty())
                file.open(G.out);
            std::ostream &out = G.out.empty() ? std::cout : file;
            out << "vertex,value\n";
            for (VertexId y = 0; y < s.values.size(); ++y)
                out << y << ',' << format(s.values[y]) << '\n';
        } else if (*lam) {
            const WeightedGraph g = load(G);
            const VertexSet a = parse_set(g, set_spec);
            const EigenResult r = lambda_min(g, a);
            emit_json(stamped({{"set", a.members()},
                               {"lambda", r.value},
                               {"residual", r.residual},
                               {"certified_interval", {r.certified_interval.first, r.certified_interval.second}},
                               {"vector", r.vector}}),
                      G.out);
        } else if (*prof) {
            const WeightedGraph g = load(G);
            emit_json(stamped(profile_to_json(exit_profile(g, center, rmax, G.q))), G.out);
        } else if (*sim) {
            const WeightedGraph g = load(G);
            const SimResult r = sim_kind == "exit" ? simulate_exit(g, ball(g, center, radius), center, trials, G.seed)
                                                   : simulate_tail(g, center, radius, time, trials, G.seed);
            emit_json(stamped({{"kind", sim_kind},
                               {"center", center},
                               {"radius", radius},
                               {"time", time},
                               {"estimate", r.estimate},
                               {"std_error", r.std_error},
                               {"trials", r.trials},
                               {"seed", r.seed}}),
                      G.out);
        } else if (*ver) {
            const WeightedGraph g = load(G);
            if (centers.empty())
                centers.push_back(center);
            json doc;
            bool pass = false;
            if (check == "fk" || check == "e" || check == "rho" || check == "pcycle" || check == "corollary") {
                const SubsetBudget budget{max_exhaustive, samples, G.seed};
                const SubsetFamily fam = subset_families(g, center, radius, budget, G.ball_factor);
                IsoOptions o;
                o.delta_grid = parse_grid(delta_spec);
                o.ball_factor = G.ball_factor;
                if (check == "pcycle") {
                    doc = json::array();
                    pass = true;
                    for (double d : o.delta_grid) {
                        const PcycleReport r = check_pcycle(g, fam.members, d, o.inner_exhaustive);
                        doc.push_back(to_json(r));
                    }
                    doc = {{"check", "pcycle"}, {"graph", g.id()}, {"center", center}, {"radius", radius},
                           {"per_delta", doc}};
                } else if (check == "corollary") {
                    const CorollaryReport r = check_corollary_forms(g, fam, o);
                    pass = r.fke.pass && r.fkll.pass && r.fkrr.pass;
                    doc = {{"fke", to_json(r.fke)}, {"fkll", to_json(r.fkll)}, {"fkrr", to_json(r.fkrr)}};
                } else {
                    const ExitProfile p = exit_profile(g, center, radius, G.q);
                    const InequalityReport r = check == "fk" ? check_FK(g, fam, p, o)
                                               : check == "e" ? check_E(g, fam, p, o)
                                                              : check_rho(g, fam, p, o);
                    pass = r.pass;
                    doc = to_json(r);
                }
            } else {
                EstimateReport r;
                const Horizon policy = parse_horizon(horizon);
                if (check == "due") {
                    DueOptions o;
                    o.n_max = n_max;
                    o.policy = policy;
                    o.q = G.q;
                    r = check_DUE(g, centers, o);
                } else if (check == "ue") {
                    UeOptions o{times, c, 10.0, beta, policy, G.q};
                    r = check_UE(g, parse_pairs(pairs), o);
                } else if (check == "dg") {
                    std::vector<SetPair> sp;
                    for (const auto &item : set_pairs) {
                        const auto ab = split(item, '/');
                        if (ab.size() != 2)
                            throw Error(ErrorKind::BadParameter, "set pair must be A/B");
                        sp.push_back({parse_set(g, ab[0]), parse_set(g, ab[1])});
                    }
                    DgOptions o{times, c, G.q, 5, policy};
                    r = check_DG(g, sp, o);
                } else if (check == "tail") {
                    TailOptions o;
                    o.radii = radii.empty() ? std::vector<int>{radius} : radii;
                    o.n_grid = times;
                    o.q = G.q;
                    r = check_exit_tail(g, centers, o);
                } else if (check == "pmv") {
                    PmvOptions o;
                    o.seed = G.seed;
                    o.q = G.q;
                    r = check_PMV(g, center, radius, o);
                } else if (check == "mv") {
                    r = check_MV(g, center, radius, MvOptions{20, G.seed});
                } else if (check == "tc") {
                    r = check_TC(g, centers, radii.empty() ? std::vector<int>{radius} : radii, TcOptions{max_points});
                } else if (check == "lvv") {
                    LvvOptions o{times, eps_grid, 1.0, beta, G.q};
                    r = check_lvv(g, parse_pairs(pairs), o);
                } else {
                    TwoStepOptions o;
                    if (!radii.empty())
                        o.radii = radii;
                    o.seed = G.seed;
                    r = check_two_step(g, o);
                }
                pass = r.pass;
                doc = to_json(r);
            }
            emit_json(stamped(doc), G.out);
            if (G.strict && !pass)
                return 1;
        } else if (*pre) {
            const PresetOutcome o = run_preset(preset, G.out.empty() ? "." : G.out, G.strict);
            for (const auto &row : o.rows)
                std::cout << row.check << ": " << (row.error.empty() ? (row.pass ? "pass" : "fail") : "error: " + row.error)
                          << '\n';
            return o.exit_code;
        }
    } catch (const Error &e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
