#include <gtest/gtest.h>

#include <random>

#include "heatlab/error.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/graph_io.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no heatlab::Error thrown";
    return ErrorKind::Format;
}

} // namespace

TEST(BuildGraph, SingleEdgeMeasures) {
    const std::vector<Edge> edges{{0, 1, 1.0}};
    const WeightedGraph g = build_graph(edges);
    EXPECT_EQ(g.vertex_count(), 2u);
    EXPECT_EQ(g.measure(0), 1.0);
    EXPECT_EQ(g.measure(1), 1.0);
}

TEST(BuildGraph, PathMeasures) {
    const std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}};
    const WeightedGraph g = build_graph(edges);
    EXPECT_EQ(g.measure(0), 1.0);
    EXPECT_EQ(g.measure(1), 2.0);
    EXPECT_EQ(g.measure(2), 1.0);
}

TEST(BuildGraph, Rejections) {
    EXPECT_EQ(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 1.0}, {2, 3, 1.0}}); }), ErrorKind::DisconnectedGraph);
    EXPECT_EQ(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 0.0}}); }), ErrorKind::NonPositiveWeight);
    EXPECT_EQ(kind_of([] { build_graph(std::vector<Edge>{{0, 1, -2.0}}); }), ErrorKind::NonPositiveWeight);
    EXPECT_EQ(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 1.0}, {1, 0, 2.0}}); }), ErrorKind::ConflictingWeight);
    EXPECT_EQ(kind_of([] { build_graph(std::vector<Edge>{{0, 1, 1.0}, {1, 1, 1.0}}); }), ErrorKind::SelfLoopDisabled);
    EXPECT_EQ(kind_of([] { build_graph(std::vector<Edge>{}); }), ErrorKind::EmptyEdgeList);
}

TEST(BuildGraph, DuplicateWithEqualWeightMerges) {
    const WeightedGraph g = build_graph(std::vector<Edge>{{0, 1, 1.5}, {1, 0, 1.5}, {1, 2, 1.0}});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.measure(1), 2.5);
}

TEST(BuildGraph, SelfLoopCountsOnce) {
    BuildOptions o;
    o.allow_self_loops = true;
    const WeightedGraph g = build_graph(std::vector<Edge>{{0, 0, 3.0}, {0, 1, 1.0}}, o);
    EXPECT_EQ(g.measure(0), 4.0);
    EXPECT_EQ(g.self_loop_weight(0), 3.0);
}

TEST(CheckP0, Examples) {
    EXPECT_EQ(check_p0(build_graph(std::vector<Edge>{{0, 1, 1.0}})).p0, 1.0);
    const auto path = build_graph(std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    EXPECT_EQ(check_p0(path).p0, 0.5);
    const P0Report box = check_p0(lattice_box(2, 7));
    EXPECT_EQ(box.p0, 0.25);
    EXPECT_TRUE(box.degree_bound_holds);
    EXPECT_EQ(box.mmccmm_violations, 0u);
}

TEST(Ball, Examples) {
    const WeightedGraph g = lattice_box(1, 11);
    const VertexId o = g.root_or_zero();
    const VertexSet b = ball(g, o, 2);
    EXPECT_EQ(b, VertexSet({o - 1, o, o + 1}));
    EXPECT_EQ(b.measure(g), 6.0);
    EXPECT_EQ(ball(g, o, 1), VertexSet::singleton(o));
    EXPECT_TRUE(ball(g, o, 0).empty());
}

TEST(Boundary, Examples) {
    const WeightedGraph line = lattice_box(1, 11);
    const VertexId o = line.root_or_zero();
    EXPECT_EQ(boundary(line, VertexSet::singleton(o)), VertexSet({o - 1, o + 1}));
    EXPECT_TRUE(boundary(line, VertexSet::whole(line)).empty());
    const WeightedGraph grid = lattice_box(2, 5);
    EXPECT_EQ(boundary(grid, VertexSet::singleton(grid.root_or_zero())).size(), 4u);
    EXPECT_EQ(closure(grid, VertexSet::singleton(grid.root_or_zero())).size(), 5u);
}

TEST(AnnulusVolume, Examples) {
    const WeightedGraph g = lattice_box(1, 11);
    const VertexId o = g.root_or_zero();
    EXPECT_EQ(annulus_volume(g, o, 3, 3), 0.0);
    EXPECT_EQ(annulus_volume(g, o, 1, 2), 4.0);
    EXPECT_EQ(annulus_volume(g, o, 0, 3), ball_volume(g, o, 3));
    EXPECT_EQ(kind_of([&] { annulus_volume(g, o, 3, 2); }), ErrorKind::RadiusOrder);
}

TEST(SetDistance, Interval) {
    const WeightedGraph g = lattice_box(1, 41);
    const VertexId o = g.root_or_zero();
    EXPECT_EQ(set_distance(g, ball(g, o - 10, 3), ball(g, o + 10, 3)), 16);
}

TEST(Horizon, GuardFires) {
    const WeightedGraph g = lattice_box(1, 11); // frontier at +-5
    EXPECT_EQ(g.horizon(g.root_or_zero()), 5);
    EXPECT_NO_THROW(require_horizon(g, g.root_or_zero(), 5, "test"));
    EXPECT_EQ(kind_of([&] { require_horizon(g, g.root_or_zero(), 6, "test"); }), ErrorKind::HorizonExceeded);
}

TEST(VolumeRegularity, LatticeDoublingNearTwo) {
    const WeightedGraph g = lattice_box(1, 401);
    const std::vector<VertexId> centers{g.root_or_zero()};
    const std::vector<int> radii{2, 4, 8, 16, 32};
    const VolumeReport r = volume_regularity_report(g, centers, radii);
    // V(0,R) = 2(2R - 1), so V(0,2R)/V(0,R) = (4R - 1)/(2R - 1).
    ASSERT_EQ(r.scales.size(), radii.size());
    for (const VolumeScale &s : r.scales)
        EXPECT_DOUBLE_EQ(s.doubling, (4.0 * s.radius - 1) / (2.0 * s.radius - 1));
    EXPECT_NEAR(r.scales.back().doubling, 2.0, 0.2);
    EXPECT_FALSE(r.doubling_unbounded);
    EXPECT_EQ(r.vbound_violations, 0u);
}

TEST(VolumeRegularity, BinaryTreeDoublingGrows) {
    std::vector<Edge> edges;
    for (VertexId v = 1; v < (1u << 11) - 1; ++v)
        edges.push_back({(v - 1) / 2, v, 1.0});
    BuildOptions o;
    o.root = 0;
    const WeightedGraph g = build_graph(edges, o);
    const std::vector<VertexId> centers{0};
    const std::vector<int> radii{1, 2, 4};
    const VolumeReport r = volume_regularity_report(g, centers, radii);
    EXPECT_TRUE(r.doubling_unbounded);
    EXPECT_GT(r.scales.back().doubling, r.scales.front().doubling);
}

TEST(VolumeRegularity, VicsekDimension) {
    const WeightedGraph g = vicsek_tree(4);
    const std::vector<VertexId> centers{g.root_or_zero()};
    const std::vector<int> radii{3, 9, 27, 81};
    const VolumeReport r = volume_regularity_report(g, centers, radii);
    EXPECT_NEAR(r.alpha, std::log(5.0) / std::log(3.0), 0.15 * std::log(5.0) / std::log(3.0));
    EXPECT_FALSE(r.doubling_unbounded);
}

// Properties over random weighted graphs.
TEST(GraphProperties, MeasureAndBalls) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 5 + t);
        double twice = 0.0;
        for (const Edge &e : g.edges()) {
            twice += 2 * e.weight;
            EXPECT_EQ(g.weight(e.u, e.v), g.weight(e.v, e.u));
        }
        double total = 0.0;
        for (VertexId x = 0; x < g.vertex_count(); ++x)
            total += g.measure(x);
        EXPECT_NEAR(total, twice, 1e-12 * twice);
        const P0Report p = check_p0(g);
        EXPECT_TRUE(p.degree_bound_holds);
        EXPECT_EQ(p.mmccmm_violations, 0u);
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(g.vertex_count() - 1));
        const VertexId x = pick(rng);
        for (int R = 0; R < 6; ++R) {
            const VertexSet b = ball(g, x, R), b1 = ball(g, x, R + 1);
            EXPECT_TRUE(b.is_subset_of(b1));
            EXPECT_TRUE(closure(g, b).is_subset_of(b1));
        }
    }
}

TEST(GraphJson, RoundTripIsBitwise) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 30);
        const WeightedGraph h = graph_from_json(nlohmann::json::parse(graph_to_json(g).dump()));
        ASSERT_EQ(g.edge_count(), h.edge_count());
        for (std::size_t i = 0; i < g.edge_count(); ++i) {
            EXPECT_EQ(g.edges()[i].u, h.edges()[i].u);
            EXPECT_EQ(g.edges()[i].v, h.edges()[i].v);
            EXPECT_EQ(g.edges()[i].weight, h.edges()[i].weight);
        }
    }
    const WeightedGraph v = vicsek_tree(2);
    const WeightedGraph w = graph_from_json(graph_to_json(v));
    EXPECT_EQ(graph_to_json(v).dump(), graph_to_json(w).dump());
}
