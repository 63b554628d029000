#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heatlab/kernel.hpp"
#include "heatlab/potential.hpp"

namespace heatlab {

/// Result of one heat-kernel check. `grid` lists every tested point with its
/// values so the headline numbers can be recomputed from the report.
struct EstimateReport {
    std::string check_name;
    std::string graph_id;
    double sup_statistic = 0.0;
    double fitted_C = std::numeric_limits<double>::quiet_NaN();
    double fitted_c = std::numeric_limits<double>::quiet_NaN();
    double beta_used = std::numeric_limits<double>::quiet_NaN();
    nlohmann::json grid = nlohmann::json::array();
    nlohmann::json witness = nlohmann::json::object();
    nlohmann::json extra = nlohmann::json::object();
    nlohmann::json config = nlohmann::json::object();
    bool pass = false;
};

nlohmann::json to_json(const EstimateReport &report);

/// E(x,.) long enough to invert at n and to evaluate at radius r.
ExitProfile profile_covering(const WeightedGraph &g, VertexId x, double n, int r, double q = 1.0);

struct DueOptions {
    long n_max = 100;
    /// The band ratio max/min of the even-time statistic is taken over n >= band_from.
    long band_from = 2;
    double band_limit = 6.0;
    Horizon policy = Horizon::Exact;
    double q = 1.0;
};

/// sup over x and n <= n_max of p_n(x,x) V(x, e(x,n)). Even and odd times are
/// reported separately; the headline uses even times.
EstimateReport check_DUE(const WeightedGraph &g, const std::vector<VertexId> &centers, const DueOptions &options);

struct UeOptions {
    std::vector<long> n_grid;
    double c = 0.0;
    /// The fitted c is the largest value keeping every statistic below this cap.
    double c_cap = 10.0;
    std::optional<double> beta;
    Horizon policy = Horizon::Exact;
    double q = 1.0;
};

/// sup of p_n(x,y) V(x,e(x,n)) exp(c (E(x,d(x,y))/n)^{1/(beta-1)}).
EstimateReport check_UE(const WeightedGraph &g, const std::vector<std::pair<VertexId, VertexId>> &pairs,
                        const UeOptions &options);

struct SetPair {
    VertexSet a;
    VertexSet b;
};

struct DgOptions {
    std::vector<long> n_grid;
    double c = 0.0;
    double q = 1.0;
    int kappa_min = 5;
    Horizon policy = Horizon::Exact;
};

/// sum_{x in A, y in B} p_n(x,y) mu(x) mu(y) against sqrt(mu(A) mu(B)) exp(-c kappa(n,A,B)).
EstimateReport check_DG(const WeightedGraph &g, const std::vector<SetPair> &pairs, const DgOptions &options);

struct TailOptions {
    std::vector<int> radii;
    /// Times tested for every radius; empty means every n in [R, R^2].
    std::vector<long> n_grid;
    double q = 1.0;
    double max_C = 10.0;
    double min_c = 0.1;
};

/// P_x(T_{B(x,R)} < n) against C exp(-c k(x,n,R)). The fitted c is the largest rate
/// allowed with C = max_C; the least-squares rate of log-tail on k is reported alongside.
EstimateReport check_exit_tail(const WeightedGraph &g, const std::vector<VertexId> &centers,
                               const TailOptions &options);

struct PmvOptions {
    double c1 = 0.5;
    double c2 = 1.0;
    int random_trials = 20;
    std::uint64_t seed = 7;
    double q = 1.0;
};

/// Smallest C with u_n(x) <= C/(E(x,R) V(x,R)) sum_{i=c1 E}^{c2 E} sum_{y in B} u_i(y) mu(y),
/// n = floor(c2 E(x,R)), over killed solutions on B(x,R) started from each delta and
/// from seeded random data.
EstimateReport check_PMV(const WeightedGraph &g, VertexId x, int R, const PmvOptions &options);

struct MvOptions {
    int random_trials = 20;
    std::uint64_t seed = 7;
};

/// Smallest C with u(x) <= C/V(x,R) sum_{y in B(x,R)} u(y) mu(y) for harmonic u in B(x,R).
EstimateReport check_MV(const WeightedGraph &g, VertexId x, int R, const MvOptions &options);

struct TcOptions {
    /// At most this many y per (x,R), x included; 0 takes every y in B(x,R).
    int max_points = 0;
};

/// max of E(y,2R)/E(x,R) over y in B(x,R); also the weak form max E(x,R)/E(y,R).
EstimateReport check_TC(const WeightedGraph &g, const std::vector<VertexId> &centers, const std::vector<int> &radii,
                        const TcOptions &options);

struct LvvOptions {
    std::vector<long> n_grid;
    std::vector<double> eps_grid;
    double exponent_constant = 1.0;
    std::optional<double> beta;
    double q = 1.0;
};

/// C_eps = max sqrt(V(x,e(x,n))/V(y,e(y,n))) exp(-eps C (E(x,d)/n)^{1/(beta-1)}).
EstimateReport check_lvv(const WeightedGraph &g, const std::vector<std::pair<VertexId, VertexId>> &pairs,
                         const LvvOptions &options);

struct TwoStepOptions {
    std::vector<int> radii{1, 2, 4};
    int points = 10;
    int sets = 200;
    int max_set_size = 30;
    std::uint64_t seed = 7;
};

/// The two-step graph as a fixture: measures, ball inclusions, exit-time and
/// volume comparisons, lambda*(A) >= lambda(closure A), and min q(x,x).
EstimateReport check_two_step(const WeightedGraph &g, const TwoStepOptions &options);

} // namespace heatlab
