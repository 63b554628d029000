#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatlab/error.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/spectral.hpp"
#include "heatlab/subsets.hpp"
#include "support.hpp"

using namespace heatlab;

TEST(DirichletEnergy, Examples) {
    const WeightedGraph edge = build_graph(std::vector<Edge>{{0, 1, 1.0}});
    EXPECT_EQ(dirichlet_energy(edge, std::vector<double>{0.0, 0.0}), 0.0);
    EXPECT_EQ(dirichlet_energy(edge, std::vector<double>{1.0, 0.0}), 1.0);
    const WeightedGraph path = build_graph(std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}});
    EXPECT_EQ(dirichlet_energy(path, std::vector<double>{0.0, 1.0, 0.0}), 2.0);
    EXPECT_THROW(dirichlet_energy(path, std::vector<double>{0.0, 1.0}), Error);
}

TEST(LambdaMin, Examples) {
    const WeightedGraph g = lattice_box(1, 21);
    const VertexId o = g.root_or_zero();
    EXPECT_NEAR(lambda_min(g, VertexSet::singleton(o)).value, 1.0, 1e-14);
    EXPECT_NEAR(lambda_min(g, VertexSet({o - 1, o, o + 1})).value, 1.0 - std::sqrt(0.5), 1e-14);
    EXPECT_NEAR(lambda_min(g, VertexSet({o, o + 1})).value, 0.5, 1e-14);
}

// On an interval of m interior lattice points the killed walk has eigenvalues cos(k pi/(m+1)).
TEST(LambdaMin, IntervalClosedForm) {
    const WeightedGraph g = lattice_box(1, 401);
    for (int R : {2, 5, 10, 40, 150}) {
        const VertexSet a = ball(g, g.root_or_zero(), R);
        const double m = static_cast<double>(a.size());
        const EigenResult r = lambda_min(g, a);
        EXPECT_NEAR(r.value, 1.0 - std::cos(std::numbers::pi / (m + 1)), 1e-12) << R;
        EXPECT_LE(r.certified_interval.first, r.value);
        EXPECT_GE(r.certified_interval.second, r.value);
        EXPECT_NEAR(rayleigh_quotient(g, r.vector), r.value, 1e-10);
        EXPECT_NEAR(norm2(g, r.vector), 1.0, 1e-12);
    }
}

TEST(LambdaMin, IterativePathAgreesWithDense) {
    const WeightedGraph g = lattice_box(2, 41);
    const VertexSet a = ball(g, g.root_or_zero(), 12);
    SpectralOptions dense, iterative;
    iterative.dense_limit = 0;
    const EigenResult d = lambda_min(g, a, dense), i = lambda_min(g, a, iterative);
    EXPECT_NEAR(d.value, i.value, 1e-9 * d.value);
    EXPECT_LE(i.certified_interval.second - i.certified_interval.first, 1e-9 * i.value);
}

TEST(LambdaMin, Errors) {
    const WeightedGraph g = lattice_box(1, 5);
    try {
        lambda_min(g, VertexSet());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptySet);
    }
    try {
        lambda_min(g, VertexSet::whole(g));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::WholeGraph);
    }
}

TEST(LambdaProperties, DomainMonotonicityAndVariationalBound) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 50);
        const VertexSet whole = VertexSet::whole(g);
        const VertexSet big = random_connected_set(g, 0, whole, 30, rng);
        const VertexSet small = random_connected_set(g, big.members()[0], big, 12, rng);
        const double lb = lambda_min(g, big).value, ls = lambda_min(g, small).value;
        EXPECT_GE(ls, lb - 1e-10);
        EXPECT_GT(lb, 0.0);
        EXPECT_LE(ls, 2.0);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> f(g.vertex_count(), 0.0);
            for (VertexId v : big)
                f[v] = u(rng);
            EXPECT_GE(rayleigh_quotient(g, f), lb - 1e-10);
        }
    }
}

TEST(Nash, HoldsWithFaberKrahnConstants) {
    // On the 1D lattice lambda(A)^{-1} <= |A|^2 / 4 roughly; take the measured constant.
    const WeightedGraph g = lattice_box(1, 201);
    const double delta = 1.0; // mu(A) = 2|A|, lambda^{-1} ~ (|A|+1)^2/pi^2
    double c = 0.0;
    for (int R = 1; R <= 40; ++R) {
        const VertexSet a = ball(g, g.root_or_zero(), R);
        c = std::max(c, 1.0 / lambda_min(g, a).value / std::pow(a.measure(g), 2 * delta));
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> f(g.vertex_count(), 0.0);
        const int width = 1 + t % 30;
        for (int k = -width; k <= width; ++k)
            f[g.root_or_zero() + k] = u(rng);
        const NashCheck n = nash_check(g, f, 1.0, c, 2 * delta);
        EXPECT_TRUE(n.hypothesis_holds) << n.hypothesis_ratio;
        EXPECT_TRUE(n.holds) << n.lhs << " > " << n.rhs;
    }
}
