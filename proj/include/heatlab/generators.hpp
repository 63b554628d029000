#pragma once

#include <vector>

#include "heatlab/graph.hpp"

namespace heatlab {

/// Grid {-(L-1)/2, ..., (L-1)/2}^d with unit weights, rooted at the origin.
/// Vertices with a coordinate on the box face form the frontier.
WeightedGraph lattice_box(int dimension, int side);

/// Level-i Vicsek tree G_i.
///
/// Level 0 is the star with a center and four corner leaves. Level i places a
/// copy of level i-1 in the centre and one in each corner, gluing each outer
/// corner of the central copy to the nearest corner of the corner copy. The
/// root z0 is the south-west corner; the copy containing it is emitted first,
/// so the ids of G_{i-1} are a prefix of the ids of G_i. The corner opposite
/// the root (distance 2*3^i) is where the infinite tree continues and is the
/// frontier.
///
/// meta.extra holds "cut_vertices" (corner of G_k for k = 0..level) and
/// "block_of_edge" is recoverable through vicsek_block_sizes().
WeightedGraph vicsek_tree(int level);

/// Vicsek tree where every edge of block G'_k carries block_weights[k].
/// Throws BadWeightSequence unless the sequence has level+1 positive,
/// nondecreasing entries. An empty sequence selects 2^k.
WeightedGraph weighted_vicsek(int level, std::vector<double> block_weights = {});

/// Vicsek tree with every edge of block G'_k replaced by a path of k+1 unit edges.
WeightedGraph stretched_vicsek(int level);

/// |V(G_k)| for k = 0..level.
std::vector<std::size_t> vicsek_block_sizes(int level);

/// Diameter via double breadth-first search (exact on trees).
int tree_diameter(const WeightedGraph &g);

} // namespace heatlab
