#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

struct SimResult {
    double estimate = 0.0;
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// Walker's alias table for one discrete distribution.
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double> &weights);
    std::size_t sample(std::mt19937_64 &rng) const;

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

/// Samples one step of the walk, P(x,y) = mu_xy / mu(x).
class WalkSampler {
public:
    explicit WalkSampler(const WeightedGraph &g);
    VertexId step(VertexId x, std::mt19937_64 &rng) const;

private:
    const WeightedGraph *graph_;
    std::vector<AliasTable> tables_;
};

/// Generator for trial `trial` of a run seeded with `seed`; independent of the order trials run in.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Sum in a fixed tree order so the result does not depend on how trials were scheduled.
double pairwise_sum(const double *values, std::size_t n);

/// Empirical mean of T_A for the walk started at x. Throws SourceOutsideSet.
SimResult simulate_exit(const WeightedGraph &g, const VertexSet &a, VertexId x, long trials, std::uint64_t seed);

/// Empirical P_x(T_{B(x,R)} < n).
SimResult simulate_tail(const WeightedGraph &g, VertexId x, int radius, int n, long trials, std::uint64_t seed);

} // namespace heatlab
