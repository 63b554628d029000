#include <gtest/gtest.h>

#include <cmath>

#include "heatlab/error.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/montecarlo.hpp"
#include "heatlab/potential.hpp"
#include "support.hpp"

using namespace heatlab;

TEST(SimulateExit, SingletonIsOneStep) {
    const WeightedGraph g = lattice_box(2, 11);
    const SimResult r = simulate_exit(g, VertexSet::singleton(g.root_or_zero()), g.root_or_zero(), 500, 3);
    EXPECT_EQ(r.estimate, 1.0);
    EXPECT_EQ(r.std_error, 0.0);
    EXPECT_EQ(r.trials, 500);
    EXPECT_EQ(r.seed, 3u);
}

TEST(SimulateExit, LatticeIntervalMatchesGamblersRuin) {
    const WeightedGraph g = lattice_box(1, 101);
    const VertexId o = g.root_or_zero();
    const SimResult r = simulate_exit(g, ball(g, o, 10), o, 10000, 7);
    EXPECT_LE(std::abs(r.estimate - 100.0), 3 * r.std_error) << r.estimate << " +- " << r.std_error;
    EXPECT_GT(r.std_error, 0.0);
}

TEST(SimulateExit, PlanarBallMatchesSolver) {
    const WeightedGraph g = lattice_box(2, 21);
    const VertexId o = g.root_or_zero();
    const VertexSet a = ball(g, o, 2);
    const SimResult r = simulate_exit(g, a, o, 20000, 5);
    EXPECT_LE(std::abs(r.estimate - mean_exit_time(g, a, o)), 3 * r.std_error);
}

TEST(SimulateExit, DeterministicAndErrors) {
    const WeightedGraph g = lattice_box(1, 41);
    const VertexId o = g.root_or_zero();
    const SimResult a = simulate_exit(g, ball(g, o, 5), o, 2000, 42);
    const SimResult b = simulate_exit(g, ball(g, o, 5), o, 2000, 42);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NE(simulate_exit(g, ball(g, o, 5), o, 2000, 43).estimate, a.estimate);
    try {
        simulate_exit(g, VertexSet::singleton(o), o + 1, 10, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SourceOutsideSet);
    }
}

TEST(SimulateTail, Examples) {
    const WeightedGraph g = lattice_box(1, 41);
    const VertexId o = g.root_or_zero();
    for (int n = 1; n <= 5; ++n)
        EXPECT_EQ(simulate_tail(g, o, 5, n, 1000, 1).estimate, 0.0);
    const SimResult one = simulate_tail(g, o, 1, 2, 1000, 1);
    EXPECT_EQ(one.estimate, 1.0);
    EXPECT_EQ(one.std_error, 0.0);
    const SimResult half = simulate_tail(g, o, 2, 3, 10000, 1);
    EXPECT_LE(std::abs(half.estimate - 0.5), 3 * half.std_error);
}

// Agreement with the exact solvers on a catalogue of graphs.
TEST(SimulateTail, AgreesWithExactTails) {
    std::mt19937_64 rng(77);
    const std::vector<WeightedGraph> graphs{lattice_box(2, 21), vicsek_tree(2), testing_support::random_graph(rng, 40)};
    int within = 0, total = 0;
    for (const WeightedGraph &g : graphs)
        for (int R : {2, 3})
            for (int n : {4, 8, 12}) {
                const VertexId x = g.root_or_zero();
                if (R > g.horizon(x))
                    continue;
                const double exact = survival_probability(g, x, R, n);
                const SimResult s = simulate_tail(g, x, R, n, 4000, 100 + n);
                within += std::abs(s.estimate - exact) <= 3 * s.std_error + 1e-12;
                ++total;
            }
    // Each comparison misses with probability about 0.3%.
    EXPECT_GE(within, total - 1);
}

TEST(AliasTable, Frequencies) {
    const std::vector<double> w{1.0, 2.0, 3.0, 4.0};
    const AliasTable table(w);
    std::mt19937_64 rng(9);
    std::vector<int> counts(4, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        ++counts[table.sample(rng)];
    for (int k = 0; k < 4; ++k) {
        const double p = w[k] / 10.0;
        EXPECT_NEAR(counts[k] / static_cast<double>(draws), p, 4 * std::sqrt(p * (1 - p) / draws));
    }
    EXPECT_THROW(AliasTable(std::vector<double>{}), Error);
}

TEST(TrialRng, IndependentOfOrder) {
    auto a = trial_rng(5, 17);
    trial_rng(5, 3)();
    auto b = trial_rng(5, 17);
    EXPECT_EQ(a(), b());
    EXPECT_NE(trial_rng(5, 17)(), trial_rng(5, 18)());
    EXPECT_NE(trial_rng(5, 17)(), trial_rng(6, 17)());
}

TEST(PairwiseSum, ExactOnIntegers) {
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<double>(i);
    EXPECT_EQ(pairwise_sum(v.data(), v.size()), 1000.0 * 1001 / 2);
    EXPECT_EQ(pairwise_sum(v.data(), 0), 0.0);
}
