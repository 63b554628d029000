#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatlab/potential.hpp"
#include "heatlab/subsets.hpp"

namespace heatlab {

/// 0.1, 0.2, ..., 1.5
std::vector<double> default_delta_grid();
/// first, first + step, ... up to last (inclusive, with rounding slack).
std::vector<double> delta_grid(double first, double last, double step);

struct IsoWitness {
    VertexSet a;
    std::optional<VertexSet> d;
    VertexId x = 0;
    int radius = 0;
    double ratio = 0.0;
};

/// Best constant per delta for one relative inequality over a family of sets.
struct InequalityReport {
    std::string check_name;
    std::string graph_id;
    std::vector<double> delta_grid;
    /// worst_constant[i] = max over tested sets of LHS / RHS-without-C at delta_grid[i].
    std::vector<double> worst_constant;
    std::vector<IsoWitness> witness;
    bool pass = false;
    std::size_t sets_checked = 0;
    nlohmann::json metadata = nlohmann::json::object();
};

struct IsoOptions {
    std::vector<double> delta_grid = default_delta_grid();
    /// B = B(x, ball_factor R) normalises the volume ratio.
    int ball_factor = 3;
    /// Sets D inside A are enumerated exhaustively when |A| is at most this.
    std::size_t inner_exhaustive = 8;
};

/// max_{y in A} E_y(A) <= C E(x,R) (mu(A)/mu(B))^delta.
InequalityReport check_E(const WeightedGraph &g, const SubsetFamily &family, const ExitProfile &profile,
                         const IsoOptions &options = {});

/// lambda(A)^{-1} <= C E(x,R) (mu(A)/mu(B))^delta. Metadata carries, per delta,
/// Nash parameters a = E(x,R)/mu(B)^delta and C so that lambda^{-1}(A) <= a C mu(A)^delta.
InequalityReport check_FK(const WeightedGraph &g, const SubsetFamily &family, const ExitProfile &profile,
                          const IsoOptions &options = {});

/// rho(D, A^c) mu(D) <= C E(x,R) (mu(A)/mu(B))^delta over D inside A.
InequalityReport check_rho(const WeightedGraph &g, const SubsetFamily &family, const ExitProfile &profile,
                           const IsoOptions &options = {});

/// Sets D inside A used by the resistance checks: every nonempty subset when
/// |A| <= inner_exhaustive, otherwise singletons, balls inside A and A itself.
std::vector<VertexSet> inner_sets(const WeightedGraph &g, const VertexSet &a, std::size_t inner_exhaustive);

/// The three absolute forms at one delta: E(A) <= C1 mu(A)^delta,
/// lambda^{-1}(A) <= C2 mu(A)^delta, rho(D,A^c) mu(D) <= C3 mu(A)^delta.
struct PcycleReport {
    double delta = 0.0;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    VertexSet witness1, witness2, witness3;
    double ratio12 = 0.0, ratio13 = 0.0, ratio23 = 0.0;
    std::size_t sets_checked = 0;
};

PcycleReport check_pcycle(const WeightedGraph &g, std::span<const VertexSet> sets, double delta,
                          std::size_t inner_exhaustive = 8);

/// The normalised forms with B = B(x,2R):
///   fke:  E(A)/E(B) <= C (mu(A)/mu(B))^delta,
///   fkll: lambda^{-1}(A)/lambda^{-1}(B) <= C (mu(A)/mu(B))^delta,
///   fkrr: rho(D,A)/rho(x,R,2R) <= C (mu(A)/mu(D))^delta (mu(D)/mu(B))^{delta-1}.
struct CorollaryReport {
    InequalityReport fke, fkll, fkrr;
};

CorollaryReport check_corollary_forms(const WeightedGraph &g, const SubsetFamily &family,
                                      const IsoOptions &options = {});

/// Constants measured at several scales; stable when max/min <= factor.
struct ScaleStability {
    double min = 0.0;
    double max = 0.0;
    double ratio = 0.0;
    bool stable = false;
};

ScaleStability scale_stability(std::span<const double> constants, double factor = 4.0);

nlohmann::json to_json(const InequalityReport &report);
nlohmann::json to_json(const PcycleReport &report);

} // namespace heatlab
