#pragma once

#include <span>
#include <utility>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

struct EigenResult {
    double value = 0.0;
    /// Eigenfunction of -Delta^A, full length, zero off A, unit norm in l^2(mu).
    std::vector<double> vector;
    /// ||(I - S_A) phi - value * phi|| for the symmetrised unit eigenvector phi.
    double residual = 0.0;
    std::pair<double, double> certified_interval{0.0, 0.0};
};

struct SpectralOptions {
    /// Sets up to this size use a dense symmetric eigensolver.
    std::size_t dense_limit = 2000;
    int max_iterations = 20000;
    double tolerance = 1e-13;
};

/// E(f,f) = 1/2 sum_{x,y} mu_xy (f(x) - f(y))^2.
double dirichlet_energy(const WeightedGraph &g, std::span<const double> f);

/// (f,g)_mu and the mu-weighted norms.
double inner_product(const WeightedGraph &g, std::span<const double> f, std::span<const double> h);
double norm1(const WeightedGraph &g, std::span<const double> f);
double norm2(const WeightedGraph &g, std::span<const double> f);

/// E(f,f) / (f,f) for f supported anywhere on the graph.
double rayleigh_quotient(const WeightedGraph &g, std::span<const double> f);

/// Smallest eigenvalue lambda(A) of -Delta^A, computed on the symmetrised
/// matrix I - S_A with S_A(x,y) = mu_xy / sqrt(mu(x) mu(y)) on A.
/// Throws EmptySet or WholeGraph.
EigenResult lambda_min(const WeightedGraph &g, const VertexSet &a, const SpectralOptions &options = {});

/// Nash-type inequality for a nonnegative finitely supported f, given
/// Faber-Krahn constants lambda(A)^{-1} <= a C mu(A)^delta:
///   ||f||_2^2 (||f||_2/||f||_1)^{2 delta} <= 2 4^delta a C E(f,f).
/// The level-set argument only uses the Faber-Krahn bound on {f > s} with
/// s = ||f||_2^2 / (4 ||f||_1), so that hypothesis is evaluated alongside.
struct NashCheck {
    double lhs = 0.0;
    double rhs = 0.0;       // 2 4^delta a C E(f,f)
    double level = 0.0;     // s = ||f||_2^2 / (4 ||f||_1)
    VertexSet level_set;    // {f > s}
    double hypothesis_ratio = 0.0; // lambda^{-1}({f>s}) / (a mu({f>s})^delta); <= C when the hypothesis holds
    bool hypothesis_holds = false;
    bool holds = false;
};

NashCheck nash_check(const WeightedGraph &g, std::span<const double> f, double a, double c, double delta);

} // namespace heatlab
