#pragma once

#include <optional>
#include <span>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

/// How a computation treats a graph that carries a frontier.
enum class Horizon {
    /// Values must coincide with the infinite graph; throw HorizonExceeded otherwise.
    Exact,
    /// Work on the finite graph as given (reflecting truncation).
    FiniteGraph,
};

/// One row p_n(source, .) of the heat kernel, optionally of the walk killed off a set.
struct KernelSlice {
    VertexId source = 0;
    int time = 0;
    std::vector<double> values;
    std::optional<VertexSet> killed_on;

    double at(VertexId y) const { return values[y]; }
    /// sum_y p_n(x,y) mu(y); equals 1 for unkilled kernels.
    double mass(const WeightedGraph &g) const;
};

/// (Pf)(x) = sum_y P(x,y) f(y) with P(x,y) = mu_xy / mu(x).
std::vector<double> transition_step(const WeightedGraph &g, std::span<const double> f);
/// Killed version: (P^A f)(x) for x in A, zero outside A. `inside` is a membership mask.
void killed_step(const WeightedGraph &g, std::span<const char> inside, std::span<const double> f,
                 std::span<double> out);

/// Iterates h_{k+1} = P h_k (or P^A h_k) in place. Starting from
/// delta_x / mu(x), h_k is the kernel row p_k(x, .).
class KernelEvolution {
public:
    KernelEvolution(const WeightedGraph &g, std::vector<double> initial, std::optional<VertexSet> killed_on = {});
    static KernelEvolution from_source(const WeightedGraph &g, VertexId x,
                                       std::optional<VertexSet> killed_on = {});

    void step();
    void advance_to(int time);
    int time() const noexcept { return time_; }
    std::span<const double> values() const noexcept { return current_; }

private:
    const WeightedGraph *graph_;
    std::vector<double> current_;
    std::vector<double> scratch_;
    std::vector<char> inside_;
    bool killed_ = false;
    int time_ = 0;
};

/// p_n(x, .). Under Horizon::Exact, requires n < d(x, frontier).
KernelSlice heat_kernel(const WeightedGraph &g, VertexId x, int n, Horizon policy = Horizon::Exact);

/// p_n^A(x, .) of the walk killed on leaving A. Throws SourceOutsideSet.
KernelSlice killed_kernel(const WeightedGraph &g, const VertexSet &a, VertexId x, int n);

/// Row G^A(y, .) = sum_k P_k^A(y, .) as a full-length vector (zero off A).
/// Throws SourceOutsideSet, AbsorbingSet when A is the whole graph.
std::vector<double> green_function(const WeightedGraph &g, const VertexSet &a, VertexId y);

/// P_x(T_{B(x,R)} < n) = 1 - sum_y P_{n-1}^{B(x,R)}(x,y).
double survival_probability(const WeightedGraph &g, VertexId x, int radius, int n);

/// Exit probabilities P_x(T_{B(x,R)} < n) for n = 1..n_max (index n-1).
std::vector<double> exit_probabilities(const WeightedGraph &g, VertexId x, int radius, int n_max);

/// The graph Gamma* of the two-step walk, mu*_xy = mu(x) P_2(x,y).
struct TwoStepGraph {
    WeightedGraph graph;
    bool bipartite = false;
    int parity = 0;
    /// original_id[v*] is the vertex of the source graph.
    std::vector<VertexId> original_id;
    /// local_id[v] is the id in Gamma*, or -1 when v is in the other parity class.
    std::vector<long> local_id;

    std::optional<VertexId> to_local(VertexId original) const;
    /// q(x,x) = Q(x,x) / mu(x) minimised over Gamma*.
    double min_return_density() const;
    /// min_x Q(x,x).
    double min_return_probability() const;
};

/// Builds Gamma*. For bipartite graphs only the parity class of the root is kept
/// and relabelled densely; the mapping is kept in the result and in meta.extra.
TwoStepGraph two_step_graph(const WeightedGraph &g);

/// Two-colouring; empty when the graph has an odd cycle or a self-loop.
std::optional<std::vector<int>> bipartition(const WeightedGraph &g);

} // namespace heatlab
