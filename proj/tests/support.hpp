#pragma once

#include <algorithm>
#include <random>
#include <tuple>
#include <vector>

#include "heatlab/graph.hpp"

namespace testing_support {

// Random connected graph: a random spanning tree plus about n extra edges, weights in [0.1, 3).
inline heatlab::WeightedGraph random_graph(std::mt19937_64 &rng, int n, bool unit_weights = false) {
    using heatlab::Edge;
    using heatlab::VertexId;
    std::uniform_real_distribution<double> w(0.1, 3.0);
    auto weight = [&] { return unit_weights ? 1.0 : w(rng); };
    std::uniform_int_distribution<int> any(0, n - 1);
    std::vector<Edge> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        edges.push_back({static_cast<VertexId>(parent(rng)), static_cast<VertexId>(v), weight()});
    }
    for (int k = 0; k < n; ++k) {
        const int a = any(rng), b = any(rng);
        if (a != b)
            edges.push_back({static_cast<VertexId>(std::min(a, b)), static_cast<VertexId>(std::max(a, b)), weight()});
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge &l, const Edge &r) { return std::tie(l.u, l.v) < std::tie(r.u, r.v); });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge &l, const Edge &r) { return l.u == r.u && l.v == r.v; }),
                edges.end());
    return heatlab::build_graph(edges);
}

} // namespace testing_support
