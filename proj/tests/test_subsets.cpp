#include <gtest/gtest.h>

#include <random>
#include <set>

#include "heatlab/error.hpp"
#include "heatlab/generators.hpp"
#include "heatlab/subsets.hpp"
#include "support.hpp"

using namespace heatlab;

namespace {

bool connected(const WeightedGraph &g, const VertexSet &s) {
    if (s.empty())
        return false;
    std::set<VertexId> seen{s.members()[0]};
    std::vector<VertexId> stack{s.members()[0]};
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (const Neighbour &n : g.neighbours(v))
            if (s.contains(n.vertex) && seen.insert(n.vertex).second)
                stack.push_back(n.vertex);
    }
    return seen.size() == s.size();
}

// Every subset of `allowed` through x, by bitmask.
std::set<VertexSet> brute_force(const WeightedGraph &g, VertexId x, const VertexSet &allowed, int max_size) {
    std::set<VertexSet> out;
    const auto &m = allowed.members();
    for (std::uint32_t bits = 1; bits < (1u << m.size()); ++bits) {
        std::vector<VertexId> s;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (bits >> i & 1u)
                s.push_back(m[i]);
        if (static_cast<int>(s.size()) > max_size)
            continue;
        VertexSet set(std::move(s));
        if (set.contains(x) && connected(g, set))
            out.insert(std::move(set));
    }
    return out;
}

} // namespace

TEST(ConnectedSubsets, LatticeExample) {
    const WeightedGraph g = lattice_box(1, 21);
    const VertexId o = g.root_or_zero();
    const auto sets = connected_subsets(g, o, ball(g, o, 3), 3);
    const std::set<VertexSet> got(sets.begin(), sets.end());
    const std::set<VertexSet> expected{VertexSet({o}),         VertexSet({o - 1, o}),     VertexSet({o, o + 1}),
                                       VertexSet({o - 1, o, o + 1}), VertexSet({o - 2, o - 1, o}),
                                       VertexSet({o, o + 1, o + 2})};
    EXPECT_EQ(sets.size(), 6u);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(connected_subsets(g, o, ball(g, o, 3), 1), std::vector<VertexSet>{VertexSet::singleton(o)});
}

TEST(ConnectedSubsets, MatchesBitmaskOracle) {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 15; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 14 + t % 4, true);
        const VertexSet allowed = random_connected_set(g, 0, VertexSet::whole(g), 12 + t % 3, rng);
        for (int cap : {1, 3, 6, 15}) {
            const auto sets = connected_subsets(g, 0, allowed, cap);
            const std::set<VertexSet> unique(sets.begin(), sets.end());
            EXPECT_EQ(unique.size(), sets.size()) << "duplicates";
            EXPECT_EQ(unique, brute_force(g, 0, allowed, cap));
        }
    }
}

TEST(ConnectedSubsets, BudgetTooLarge) {
    const WeightedGraph g = lattice_box(2, 21);
    const VertexId o = g.root_or_zero();
    try {
        connected_subsets(g, o, ball(g, o, 8), 10, 1000);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetTooLarge);
    }
}

TEST(RandomConnectedSet, ConnectedInsideAndSized) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 50; ++t) {
        const WeightedGraph g = testing_support::random_graph(rng, 60);
        const VertexSet allowed = ball(g, 0, 3);
        const VertexSet s = random_connected_set(g, 0, allowed, 1 + t % 20, rng);
        EXPECT_TRUE(connected(g, s));
        EXPECT_TRUE(s.is_subset_of(allowed));
        EXPECT_TRUE(s.contains(0));
        EXPECT_EQ(s.size(), std::min<std::size_t>(1 + t % 20, allowed.size()));
    }
}

TEST(SubsetFamilies, ContentsAndDeterminism) {
    const WeightedGraph g = lattice_box(2, 41);
    const VertexId o = g.root_or_zero();
    SubsetBudget budget;
    budget.max_exhaustive_size = 5;
    budget.samples = 40;
    budget.seed = 11;
    const SubsetFamily f = subset_families(g, o, 3, budget);
    const SubsetFamily h = subset_families(g, o, 3, budget);
    EXPECT_EQ(f.members, h.members);
    EXPECT_EQ(f.provenance, h.provenance);

    const VertexSet big = ball(g, o, 9);
    std::size_t exhaustive = 0, random = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_FALSE(f.members[i].empty());
        EXPECT_TRUE(f.members[i].is_subset_of(big));
        exhaustive += f.provenance[i] == Provenance::Exhaustive;
        random += f.provenance[i] == Provenance::BfsRandom;
    }
    // Connected sets of at most 5 cells through a point of Z^2 (polyominoes): 1 + 4 + 18 + 76 + 315.
    EXPECT_EQ(exhaustive, 414u);
    EXPECT_GT(random, 0u);
    const std::set<VertexSet> unique(f.members.begin(), f.members.end());
    EXPECT_EQ(unique.size(), f.size());
    for (int r = 1; r <= 6; ++r)
        EXPECT_TRUE(unique.count(ball(g, o, r)));

    budget.seed = 12;
    EXPECT_NE(subset_families(g, o, 3, budget).members, f.members);
}

TEST(SubsetFamilies, CapOneGivesSingletonOnly) {
    const WeightedGraph g = lattice_box(1, 41);
    SubsetBudget budget;
    budget.max_exhaustive_size = 1;
    budget.samples = 0;
    const SubsetFamily f = subset_families(g, g.root_or_zero(), 2, budget);
    std::vector<VertexSet> exhaustive;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.provenance[i] == Provenance::Exhaustive)
            exhaustive.push_back(f.members[i]);
    EXPECT_EQ(exhaustive, std::vector<VertexSet>{VertexSet::singleton(g.root_or_zero())});
}

TEST(SubsetFamilies, HorizonGuard) {
    const WeightedGraph g = lattice_box(1, 21);
    try {
        subset_families(g, g.root_or_zero(), 4, SubsetBudget{});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::HorizonExceeded);
    }
}
