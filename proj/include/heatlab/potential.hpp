#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

/// Exit times come out of linear solves, so E(x,R) = R^2 may land one ulp
/// below R^2. Threshold comparisons of exit times allow this relative slack.
inline constexpr double kExitSlack = 1e-12;

/// a >= b up to kExitSlack.
inline bool exit_at_least(double a, double b) { return a >= b * (1 - kExitSlack); }

/// Equilibrium potential: f = 1 on `source`, 0 on `sink`, harmonic elsewhere.
struct HarmonicSolution {
    std::vector<double> potential;
    double energy = 0.0;
    VertexSet source;
    VertexSet sink;
    /// max |Pf - f| over the harmonic vertices.
    double residual = 0.0;
};

HarmonicSolution harmonic_potential(const WeightedGraph &g, const VertexSet &a, const VertexSet &b);

/// rho(A,B) = 1 / inf{E(f,f) : f|_A = 1, f|_B = 0}.
/// Throws SetsIntersect, EmptySet, NoSeparation.
double effective_resistance(const WeightedGraph &g, const VertexSet &a, const VertexSet &b);

/// rho(B(x,r), Gamma \ B(x,R)); requires 0 < r < R <= d(x, frontier).
double annulus_resistance(const WeightedGraph &g, VertexId x, int r, int R);

/// E_y(A) for every y, zero off A. Solves (I - P^A) u = 1.
std::vector<double> exit_times(const WeightedGraph &g, const VertexSet &a);
double mean_exit_time(const WeightedGraph &g, const VertexSet &a, VertexId x);
/// (max_{y in A} E_y(A), argmax); ties go to the smallest id.
std::pair<double, VertexId> extreme_exit_time(const WeightedGraph &g, const VertexSet &a);

struct BetaFit {
    /// Least-squares slope of log E(x,R) against log R over dyadic R >= 2.
    double beta = 0.0;
    /// Smallest local dyadic slope log2(E(2R)/E(R)).
    double beta_prime = 0.0;
    double residual = 0.0;
    /// (R, log2(E(2R)/E(R))) for dyadic R.
    std::vector<std::pair<int, double>> local_slopes;
};

BetaFit fit_beta(std::span<const double> table);

struct ExitProfile {
    VertexId center = 0;
    /// table[R] = E(x,R), R = 0..rmax.
    std::vector<double> table;
    BetaFit fit;
    double q = 1.0;

    int rmax() const { return static_cast<int>(table.size()) - 1; }
    double at(int R) const { return table.at(static_cast<std::size_t>(R)); }
};

/// E(x,R) for R = 0..rmax, one Dirichlet solve per radius. Requires rmax <= d(x, frontier).
ExitProfile exit_profile(const WeightedGraph &g, VertexId x, int rmax, double q = 1.0);

/// Grows the table until E(x,R) >= n. Throws HorizonExceeded if the frontier comes first.
ExitProfile exit_profile_until(const WeightedGraph &g, VertexId x, double n, double q = 1.0);

/// e(x,n) = min{r : E(x,r) >= n}. Throws BeyondProfile.
int inverse_exit(const ExitProfile &profile, double n);

/// Largest k >= 1 with n/k <= q E(z, floor(R/k)), or 0. The table holds E(z, .) up to at least R.
int subgaussian_k(std::span<const double> table, long n, int R, double q);
int subgaussian_k(const ExitProfile &profile, long n, int R, double q);

/// Smallest integer a >= 2 with E(x, aR) >= 2 E(x,R) inside the table, or -1.
int exit_anti_doubling(const ExitProfile &profile, int R);

/// Per-centre exit profiles, shared between checks. Thread-safe.
class ProfileCache {
public:
    ProfileCache(const WeightedGraph &g, double q = 1.0) : graph_(&g), q_(q) {}

    /// A profile at z covering at least radius rmax.
    std::shared_ptr<const ExitProfile> get(VertexId z, int rmax);
    double q() const noexcept { return q_; }
    const WeightedGraph &graph() const noexcept { return *graph_; }

private:
    const WeightedGraph *graph_;
    double q_;
    std::mutex mutex_;
    std::map<VertexId, std::shared_ptr<const ExitProfile>> profiles_;
};

/// k(x,n,R) = min over z in B(x,R) of k_z(n,R).
int subgaussian_kernel(ProfileCache &cache, VertexId x, long n, int R);

/// kappa(n,A,B) = max(k(n,A,B), k(n,B,A)), k(n,A,B) = min_{z in A} k_z(n, d(A,B)).
int kappa(ProfileCache &cache, long n, const VertexSet &a, const VertexSet &b);

/// The four quantities compared at one scale (x, R).
struct ScaleComparison {
    double inverse_lambda = 0.0; // 1 / lambda(B(x,2R))
    double exit_time = 0.0;      // E(x,2R)
    double extreme_exit = 0.0;   // max exit time from B(x,2R)
    double resistance_volume = 0.0; // rho(x,R,2R) v(x,R,2R)
    /// max over pairs of max(a/b, b/a).
    double max_ratio = 0.0;
};

ScaleComparison compare_scale(const WeightedGraph &g, VertexId x, int R);

/// lambda(B) rho(A, B^c) mu(A), which never exceeds 1 for A inside B.
double lambda_resistance_product(const WeightedGraph &g, const VertexSet &a, const VertexSet &b);

} // namespace heatlab
