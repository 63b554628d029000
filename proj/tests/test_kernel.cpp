#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heatlab/error.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/potential.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// All rows P_k(x, .) for k <= n_max, optionally killed outside a.
std::vector<std::vector<std::vector<double>>> rows(const WeightedGraph &g, int n_max,
                                                   const std::optional<VertexSet> &a = {}) {
    std::vector<std::vector<std::vector<double>>> out(g.vertex_count());
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        if (a && !a->contains(x))
            continue;
        auto evo = KernelEvolution::from_source(g, x, a);
        for (int n = 0; n <= n_max; ++n) {
            if (n)
                evo.step();
            out[x].emplace_back(evo.values().begin(), evo.values().end());
        }
    }
    return out;
}

} // namespace

TEST(TransitionStep, Examples) {
    const WeightedGraph g = lattice_box(1, 9);
    const VertexId o = g.root_or_zero();
    std::vector<double> one(g.vertex_count(), 1.0);
    for (double v : transition_step(g, one))
        EXPECT_DOUBLE_EQ(v, 1.0);
    std::vector<double> delta(g.vertex_count(), 0.0);
    delta[o] = 1.0;
    const auto p = transition_step(g, delta);
    for (VertexId y = 0; y < g.vertex_count(); ++y)
        EXPECT_EQ(p[y], (y == o - 1 || y == o + 1) ? 0.5 : 0.0);

    const WeightedGraph edge = build_graph(std::vector<Edge>{{0, 1, 1.0}});
    EXPECT_EQ(transition_step(edge, std::vector<double>{1.0, 0.0}), (std::vector<double>{0.0, 1.0}));
}

TEST(HeatKernel, LatticeValues) {
    const WeightedGraph g = lattice_box(1, 21);
    const VertexId o = g.root_or_zero();
    EXPECT_EQ(heat_kernel(g, o, 0).at(o), 0.5);
    EXPECT_EQ(heat_kernel(g, o, 0).at(o + 1), 0.0);
    EXPECT_EQ(heat_kernel(g, o, 1).at(o + 1), 0.25);
    EXPECT_EQ(heat_kernel(g, o, 2).at(o), 0.25);
}

TEST(HeatKernel, BinomialOracle) {
    const WeightedGraph g = lattice_box(1, 101);
    const VertexId o = g.root_or_zero();
    for (int n = 0; n <= 40; ++n) {
        const KernelSlice s = heat_kernel(g, o, n);
        for (int y = -n; y <= n; ++y) {
            const double expected = (n + y) % 2 == 0 ? binomial(n, (n + y) / 2) / std::ldexp(1.0, n) / 2.0 : 0.0;
            EXPECT_NEAR(s.at(static_cast<VertexId>(static_cast<int>(o) + y)), expected, 1e-14);
        }
    }
}

TEST(HeatKernel, HorizonGuard) {
    const WeightedGraph g = lattice_box(1, 21); // frontier at distance 10
    EXPECT_NO_THROW(heat_kernel(g, g.root_or_zero(), 9));
    try {
        heat_kernel(g, g.root_or_zero(), 10);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::HorizonExceeded);
    }
    EXPECT_NO_THROW(heat_kernel(g, g.root_or_zero(), 50, Horizon::FiniteGraph));
}

TEST(KilledKernel, Examples) {
    const WeightedGraph g = lattice_box(1, 21);
    const VertexId o = g.root_or_zero();
    for (int n = 1; n <= 4; ++n)
        EXPECT_EQ(killed_kernel(g, VertexSet::singleton(o), o, n).at(o), 0.0);
    EXPECT_EQ(killed_kernel(g, VertexSet({o - 1, o, o + 1}), o, 2).at(o), 0.25);
    const KernelSlice whole = killed_kernel(g, VertexSet::whole(g), o, 7);
    const KernelSlice free = heat_kernel(g, o, 7, Horizon::FiniteGraph);
    EXPECT_EQ(whole.values, free.values);
    try {
        killed_kernel(g, VertexSet::singleton(o), o + 1, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SourceOutsideSet);
    }
}

TEST(KilledKernel, MonotoneInTheSet) {
    std::mt19937_64 rng(4);
    const WeightedGraph g = testing_support::random_graph(rng, 40);
    const VertexSet small = ball(g, 0, 2), large = ball(g, 0, 3);
    for (int n = 0; n < 12; ++n) {
        const auto a = killed_kernel(g, small, 0, n), b = killed_kernel(g, large, 0, n);
        for (VertexId y = 0; y < g.vertex_count(); ++y)
            EXPECT_LE(a.at(y), b.at(y) + 1e-15);
        EXPECT_LE(a.mass(g), 1.0 + 1e-12);
    }
}

TEST(GreenFunction, Examples) {
    const WeightedGraph g = lattice_box(1, 21);
    const VertexId o = g.root_or_zero();
    EXPECT_DOUBLE_EQ(green_function(g, VertexSet::singleton(o), o)[o], 1.0);
    EXPECT_NEAR(green_function(g, VertexSet({o - 1, o, o + 1}), o)[o], 2.0, 1e-12);
    try {
        green_function(g, VertexSet::whole(g), o);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::AbsorbingSet);
    }
}

TEST(GreenFunction, SymmetryAndExitTimeIdentity) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 30);
        const VertexSet a = ball(g, static_cast<VertexId>(t), 3);
        if (a.size() == g.vertex_count())
            continue;
        const auto exits = exit_times(g, a);
        std::vector<std::vector<double>> rows_g;
        for (VertexId y : a) {
            const auto row = green_function(g, a, y);
            double total = 0.0;
            for (double v : row)
                total += v;
            EXPECT_NEAR(total, exits[y], 1e-10);
            rows_g.push_back(row);
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < a.size(); ++j) {
                const VertexId y = a.members()[i], z = a.members()[j];
                EXPECT_NEAR(rows_g[i][z] / g.measure(z), rows_g[j][y] / g.measure(y), 1e-10);
            }
    }
}

TEST(Survival, Examples) {
    const WeightedGraph g = lattice_box(1, 21);
    const VertexId o = g.root_or_zero();
    EXPECT_EQ(survival_probability(g, o, 1, 1), 0.0);
    EXPECT_EQ(survival_probability(g, o, 1, 2), 1.0);
    EXPECT_DOUBLE_EQ(survival_probability(g, o, 2, 3), 0.5);
    const auto probs = exit_probabilities(g, o, 3, 10);
    for (int n = 1; n <= 10; ++n)
        EXPECT_DOUBLE_EQ(probs[n - 1], survival_probability(g, o, 3, n));
}

TEST(KernelProperties, MassSymmetryChapmanKolmogorov) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 6; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 20 + 10 * t);
        const auto p = rows(g, 16);
        const std::size_t n = g.vertex_count();
        for (VertexId x = 0; x < n; ++x)
            for (int k = 0; k <= 16; ++k) {
                double mass = 0.0;
                for (VertexId y = 0; y < n; ++y) {
                    mass += p[x][k][y] * g.measure(y);
                    EXPECT_NEAR(p[x][k][y], p[y][k][x], 1e-12);
                }
                EXPECT_NEAR(mass, 1.0, 1e-12);
            }
        for (VertexId x = 0; x < n; x += 3)
            for (VertexId y = 0; y < n; y += 5)
                for (int a = 0; a <= 8; ++a)
                    for (int b = 0; b <= 8; ++b) {
                        double s = 0.0;
                        for (VertexId z = 0; z < n; ++z)
                            s += p[x][a][z] * g.measure(z) * p[z][b][y] * g.measure(y);
                        EXPECT_NEAR(s, p[x][a + b][y] * g.measure(y), 1e-10);
                    }
    }
}

TEST(KernelProperties, KilledCauchySchwarzAndTimeMonotonicity) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 6; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 40);
        const VertexSet a = ball(g, static_cast<VertexId>(t), 2 + t % 2);
        const auto p = rows(g, 24, a);
        for (VertexId x : a) {
            for (int n = 0; n < 12; ++n) {
                const double even = p[x][2 * n][x] * g.measure(x);
                EXPECT_LE(p[x][2 * n + 2][x] * g.measure(x), even * (1 + 1e-12));
                EXPECT_LE(p[x][2 * n + 1][x] * g.measure(x), even * (1 + 1e-12));
            }
            for (VertexId y : a)
                for (int n = 0; n <= 6; ++n)
                    for (int m = 0; m <= 6; ++m)
                        EXPECT_LE(p[x][n + m][y], std::sqrt(p[x][2 * n][x] * p[y][2 * m][y]) + 1e-12);
        }
    }
}

// p_n(x,y) <= p_n^A(x,y) + P_x(T_A <= n) max_{z in boundary, k < n} p_k(z,y).
TEST(KernelProperties, FirstExitDecomposition) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 5; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 30);
        const VertexSet a = ball(g, 0, 2);
        const VertexSet edge = boundary(g, a);
        if (edge.empty())
            continue;
        const auto free = rows(g, 10);
        const auto killed = rows(g, 10, a);
        for (VertexId x : a)
            for (int n = 1; n <= 10; ++n) {
                double survive = 0.0;
                for (VertexId y = 0; y < g.vertex_count(); ++y)
                    survive += killed[x][n][y] * g.measure(y);
                for (VertexId y = 0; y < g.vertex_count(); ++y) {
                    double worst = 0.0;
                    for (VertexId z : edge)
                        for (int k = 0; k < n; ++k)
                            worst = std::max(worst, free[z][k][y]);
                    EXPECT_LE(free[x][n][y], killed[x][n][y] + (1.0 - survive) * worst + 1e-12);
                }
            }
    }
}

TEST(TwoStep, LatticeWeights) {
    const WeightedGraph g = lattice_box(1, 21);
    const TwoStepGraph ts = two_step_graph(g);
    EXPECT_TRUE(ts.bipartite);
    const VertexId o = *ts.to_local(g.root_or_zero());
    const VertexId two = *ts.to_local(g.root_or_zero() + 2);
    EXPECT_EQ(ts.graph.weight(o, two), 0.5);
    EXPECT_EQ(ts.graph.weight(o, o), 1.0);
    EXPECT_FALSE(ts.to_local(g.root_or_zero() + 1).has_value());
    for (VertexId v = 0; v < ts.graph.vertex_count(); ++v)
        EXPECT_EQ(ts.graph.measure(v), g.measure(ts.original_id[v]));
}

TEST(TwoStep, SingleEdge) {
    const WeightedGraph g = build_graph(std::vector<Edge>{{0, 1, 1.0}});
    const TwoStepGraph ts = two_step_graph(g);
    EXPECT_EQ(ts.graph.vertex_count(), 1u);
    EXPECT_EQ(ts.graph.self_loop_weight(0), 1.0);
    EXPECT_EQ(ts.min_return_probability(), 1.0);
}

TEST(TwoStep, MeasurePreservedOnRandomGraphs) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 25);
        const TwoStepGraph ts = two_step_graph(g);
        EXPECT_EQ(ts.bipartite, bipartition(g).has_value());
        for (VertexId v = 0; v < ts.graph.vertex_count(); ++v)
            EXPECT_NEAR(ts.graph.measure(v), g.measure(ts.original_id[v]), 1e-13 * g.measure(ts.original_id[v]));
        EXPECT_GT(ts.min_return_density(), 0.0);
    }
}
