#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

enum class Provenance { Exhaustive, Subball, Annulus, BfsRandom, Given };

std::string to_string(Provenance p);

struct SubsetBudget {
    int max_exhaustive_size = 12;
    int samples = 200;
    std::uint64_t seed = 7;
};

/// Test sets A inside B(x, ball_factor * R).
struct SubsetFamily {
    VertexId center = 0;
    int radius = 1;
    int ball_factor = 3;
    std::uint64_t seed = 0;
    std::vector<VertexSet> members;
    std::vector<Provenance> provenance;

    std::size_t size() const { return members.size(); }
    void add(VertexSet s, Provenance p);
};

/// Default cap on the number of sets an exhaustive enumeration may produce.
inline constexpr std::size_t kEnumerationLimit = 10'000'000;

/// Calls visit(S) once for every connected S with x in S, S inside `allowed`, |S| <= max_size.
/// Throws BudgetTooLarge once more than `limit` sets have been produced.
std::size_t for_each_connected_subset(const WeightedGraph &g, VertexId x, const VertexSet &allowed, int max_size,
                                      const std::function<void(const VertexSet &)> &visit,
                                      std::size_t limit = kEnumerationLimit);

std::vector<VertexSet> connected_subsets(const WeightedGraph &g, VertexId x, const VertexSet &allowed, int max_size,
                                         std::size_t limit = kEnumerationLimit);

/// Exhaustive connected sets through x, sub-balls B(y,r) with y in B(x,R) and r <= 2R,
/// annuli around x, and `samples` randomly grown connected sets. All inside
/// B(x, ball_factor R), duplicates dropped. Requires ball_factor R <= d(x, frontier).
SubsetFamily subset_families(const WeightedGraph &g, VertexId x, int R, const SubsetBudget &budget,
                             int ball_factor = 3);

/// A grown connected set: start at `start`, repeatedly add a uniformly chosen
/// neighbour of the current set that lies in `allowed`.
VertexSet random_connected_set(const WeightedGraph &g, VertexId start, const VertexSet &allowed, std::size_t size,
                               std::mt19937_64 &rng);

} // namespace heatlab
