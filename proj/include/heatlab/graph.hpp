#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace heatlab {

using VertexId = std::uint32_t;

/// Sentinel distance for unreachable vertices and for graphs without a frontier.
inline constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

struct Edge {
    VertexId u;
    VertexId v;
    double weight;
};

struct Neighbour {
    VertexId vertex;
    double weight;
};

/// Provenance and truncation data carried alongside a graph.
///
/// A finite graph that stands in for an infinite one lists its `frontier`: the
/// vertices whose neighbourhood was cut by the truncation. Computations whose
/// value must agree with the infinite graph check their radii and times
/// against the distance to the frontier. An empty frontier means the graph is
/// taken as it is and no horizon applies.
struct GraphMeta {
    std::string family = "custom";
    nlohmann::json params = nlohmann::json::object();
    int safe_radius = -1;
    std::vector<VertexId> frontier;
    std::vector<std::vector<int>> coords;
    nlohmann::json extra = nlohmann::json::object();
};

struct BuildOptions {
    bool allow_self_loops = false;
    std::optional<VertexId> root;
    GraphMeta meta;
};

class DistanceCache;

/// Finite connected graph with symmetric positive edge weights.
///
/// Immutable once built. The vertex measure is the weighted degree; a
/// self-loop at x contributes its weight once to the measure of x.
class WeightedGraph {
public:
    std::size_t vertex_count() const noexcept { return measure_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    /// Canonical edge list, u <= v, sorted lexicographically.
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const Neighbour> neighbours(VertexId x) const noexcept {
        return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
    }
    std::size_t degree(VertexId x) const noexcept { return offsets_[x + 1] - offsets_[x]; }

    double measure(VertexId x) const noexcept { return measure_[x]; }
    std::span<const double> measures() const noexcept { return measure_; }
    double total_measure() const noexcept { return total_measure_; }

    /// Weight of the edge {x, y}, zero when absent.
    double weight(VertexId x, VertexId y) const noexcept;
    double self_loop_weight(VertexId x) const noexcept { return weight(x, x); }
    bool has_self_loops() const noexcept { return has_self_loops_; }

    std::optional<VertexId> root() const noexcept { return root_; }
    VertexId root_or_zero() const noexcept { return root_.value_or(0); }
    const GraphMeta &meta() const noexcept { return meta_; }
    int safe_radius() const noexcept { return meta_.safe_radius; }

    bool contains(VertexId x) const noexcept { return x < vertex_count(); }

    /// Breadth-first distances from `source`; cached per source.
    std::shared_ptr<const std::vector<int>> distances_from(VertexId source) const;
    int distance(VertexId x, VertexId y) const;

    /// Distance from x to the nearest frontier vertex, or kInfiniteDistance.
    int horizon(VertexId x) const;

    /// Short human-readable identity, e.g. "lattice_box(d=1,L=5)".
    std::string id() const;

private:
    friend WeightedGraph build_graph(std::span<const Edge>, BuildOptions);

    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbour> adjacency_;
    std::vector<double> measure_;
    double total_measure_ = 0.0;
    bool has_self_loops_ = false;
    std::optional<VertexId> root_;
    GraphMeta meta_;
    std::shared_ptr<DistanceCache> cache_;
};

/// Validates an edge list and builds the graph.
///
/// Vertex count is one past the largest id. Duplicate entries (in either
/// orientation) are merged when their weights agree bitwise and rejected
/// otherwise. Throws DisconnectedGraph, NonPositiveWeight, ConflictingWeight,
/// SelfLoopDisabled or EmptyEdgeList.
WeightedGraph build_graph(std::span<const Edge> edges, BuildOptions options = {});

/// build_graph, then sets meta.safe_radius to the largest R with B(root, 3R+1)
/// clear of the frontier (-1 when there is no frontier).
WeightedGraph build_graph_with_safe_radius(std::span<const Edge> edges, BuildOptions options);

/// Finite vertex subset kept as a sorted, duplicate-free list.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<VertexId> members);
    static VertexSet singleton(VertexId x) { return VertexSet(std::vector<VertexId>{x}); }
    static VertexSet whole(const WeightedGraph &g);

    std::span<const VertexId> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(VertexId x) const noexcept;
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool is_subset_of(const VertexSet &other) const;
    bool intersects(const VertexSet &other) const;

    double measure(const WeightedGraph &g) const;

    /// Membership mask of length g.vertex_count().
    std::vector<char> mask(const WeightedGraph &g) const;

    friend bool operator==(const VertexSet &, const VertexSet &) = default;
    /// Lexicographic on the sorted members.
    friend auto operator<=>(const VertexSet &l, const VertexSet &r) { return l.members_ <=> r.members_; }

private:
    std::vector<VertexId> members_;
};

VertexSet set_union(const VertexSet &a, const VertexSet &b);
VertexSet set_difference(const VertexSet &a, const VertexSet &b);
VertexSet complement(const WeightedGraph &g, const VertexSet &a);

/// Open ball {y : d(x,y) < R}.
VertexSet ball(const WeightedGraph &g, VertexId x, int radius);
/// V(x,R) = mu(B(x,R)).
double ball_volume(const WeightedGraph &g, VertexId x, int radius);
/// v(x,r,R) = V(x,R) - V(x,r); throws RadiusOrder when r > R.
double annulus_volume(const WeightedGraph &g, VertexId x, int inner, int outer);

VertexSet boundary(const WeightedGraph &g, const VertexSet &a);
VertexSet closure(const WeightedGraph &g, const VertexSet &a);

/// min over all ordered pairs (x in A, y in B) of d(x,y).
int set_distance(const WeightedGraph &g, const VertexSet &a, const VertexSet &b);

/// Throws HorizonExceeded when the ball of the given radius about x reaches
/// the frontier (no-op for graphs without a frontier).
void require_horizon(const WeightedGraph &g, VertexId x, int radius, const char *what);
/// Throws HorizonExceeded when `a` contains a frontier vertex.
void require_inside_horizon(const WeightedGraph &g, const VertexSet &a, const char *what);

struct P0Report {
    double p0 = 0.0;
    std::size_t max_degree = 0;
    bool degree_bound_holds = true;
    std::size_t pairs_checked = 0;
    std::size_t mmccmm_violations = 0;
    double worst_mmccmm_ratio = 0.0;
};

/// p0 = min over oriented edges of mu_xy / mu(x), with the degree bound and
/// the p0^d(x,y) mu(y) <= mu(x) comparison checked on sampled pairs.
P0Report check_p0(const WeightedGraph &g, std::size_t max_pairs = 2000, std::uint64_t seed = 1);

struct VolumeScale {
    int radius = 0;
    double doubling = 0.0;     // max_x V(x,2R)/V(x,R)
    double pd2v = 0.0;         // max_x max_{y in B(x,R)} V(x,2R)/V(y,R)
    double v3_ratio_min = 0.0; // min_x (V(x,2R)-V(x,R))/V(x,R)
    int anti_doubling = -1;    // max_x min{A : V(x,AR) >= 2V(x,R)}, -1 if not reached
};

struct VolumeReport {
    std::vector<VolumeScale> scales;
    double doubling_constant = 0.0; // D_V over all tested scales
    double pd2v_constant = 0.0;
    int anti_doubling_constant = -1;
    double alpha = 0.0;             // least-squares slope of log V(x,R) against log R
    double alpha_residual = 0.0;
    double vbound_constant = 0.0;   // smallest C with V(x,R) <= C^R mu(x) on the tested grid
    std::size_t vbound_violations = 0;
    bool doubling_unbounded = false;
};

VolumeReport volume_regularity_report(const WeightedGraph &g, std::span<const VertexId> centers,
                                      std::span<const int> radii);

} // namespace heatlab
