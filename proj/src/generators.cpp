#include "heatlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "heatlab/error.hpp"

namespace heatlab {

using nlohmann::json;

namespace {

int pow3(int k) {
    int p = 1;
    for (int i = 0; i < k; ++i)
        p *= 3;
    return p;
}

struct VicsekSkeleton {
    std::vector<Edge> edges;
    std::vector<std::vector<int>> coords;
    std::vector<VertexId> cut_vertices;
};

VicsekSkeleton vicsek_skeleton(int level) {
    if (level < 0)
        throw Error(ErrorKind::BadParameter, "Vicsek level must be >= 0");
    if (level > 9)
        throw Error(ErrorKind::BadParameter, "Vicsek level above 9 is not supported");

    VicsekSkeleton sk;
    std::map<std::pair<int, int>, VertexId> ids;
    auto vertex = [&](int x, int y) {
        auto [it, inserted] = ids.emplace(std::pair{x, y}, static_cast<VertexId>(ids.size()));
        if (inserted)
            sk.coords.push_back({x, y});
        return it->second;
    };

    auto emit = [&](auto &&self, int lvl, int ox, int oy) -> void {
        if (lvl == 0) {
            VertexId sw = vertex(ox, oy);
            VertexId c = vertex(ox + 1, oy + 1);
            VertexId nw = vertex(ox, oy + 2);
            VertexId ne = vertex(ox + 2, oy + 2);
            VertexId se = vertex(ox + 2, oy);
            for (VertexId corner : {sw, nw, ne, se})
                sk.edges.push_back({c, corner, 1.0});
            return;
        }
        const int s = 2 * pow3(lvl - 1);
        self(self, lvl - 1, ox, oy);                 // SW, holds the root
        self(self, lvl - 1, ox + s, oy + s);         // centre
        self(self, lvl - 1, ox, oy + 2 * s);         // NW
        self(self, lvl - 1, ox + 2 * s, oy + 2 * s); // NE
        self(self, lvl - 1, ox + 2 * s, oy);         // SE
    };
    emit(emit, level, 0, 0);

    for (int k = 0; k <= level; ++k) {
        const int s = 2 * pow3(k);
        sk.cut_vertices.push_back(ids.at({s, s}));
    }
    return sk;
}

std::size_t block_of(const Edge &e, const std::vector<std::size_t> &sizes) {
    const std::size_t top = std::max(e.u, e.v);
    for (std::size_t k = 0; k < sizes.size(); ++k)
        if (top < sizes[k])
            return k;
    return sizes.size() - 1;
}

} // namespace

WeightedGraph lattice_box(int dimension, int side) {
    if (dimension < 1 || dimension > 3)
        throw Error(ErrorKind::BadParameter, "lattice dimension must be 1, 2 or 3");
    if (side < 3)
        throw Error(ErrorKind::SizeTooSmall, "lattice side must be at least 3");
    if (side % 2 == 0)
        throw Error(ErrorKind::BadParameter, "lattice side must be odd so that the origin is a vertex");

    const int half = (side - 1) / 2;
    std::size_t count = 1;
    for (int k = 0; k < dimension; ++k)
        count *= static_cast<std::size_t>(side);

    auto id_of = [&](const std::vector<int> &c) {
        std::size_t id = 0;
        for (int k = 0; k < dimension; ++k)
            id = id * side + static_cast<std::size_t>(c[k] + half);
        return static_cast<VertexId>(id);
    };

    GraphMeta meta;
    meta.family = "lattice_box";
    meta.params = {{"d", dimension}, {"L", side}};
    meta.coords.reserve(count);
    std::vector<Edge> edges;
    std::vector<int> c(dimension, -half);
    for (std::size_t id = 0; id < count; ++id) {
        meta.coords.push_back(c);
        bool on_face = false;
        for (int k = 0; k < dimension; ++k) {
            if (std::abs(c[k]) == half)
                on_face = true;
            if (c[k] < half) {
                auto next = c;
                ++next[k];
                edges.push_back({static_cast<VertexId>(id), id_of(next), 1.0});
            }
        }
        if (on_face)
            meta.frontier.push_back(static_cast<VertexId>(id));
        for (int k = dimension - 1; k >= 0; --k) {
            if (++c[k] <= half)
                break;
            c[k] = -half;
        }
    }

    BuildOptions options;
    options.root = id_of(std::vector<int>(dimension, 0));
    options.meta = std::move(meta);
    return build_graph_with_safe_radius(edges, std::move(options));
}

std::vector<std::size_t> vicsek_block_sizes(int level) {
    std::vector<std::size_t> sizes;
    std::size_t v = 5;
    for (int k = 0; k <= level; ++k) {
        sizes.push_back(v);
        v = 5 * v - 4;
    }
    return sizes;
}

WeightedGraph vicsek_tree(int level) { return weighted_vicsek(level, std::vector<double>(level + 1, 1.0)); }

WeightedGraph weighted_vicsek(int level, std::vector<double> block_weights) {
    if (level < 0)
        throw Error(ErrorKind::BadParameter, "Vicsek level must be >= 0");
    const bool defaulted = block_weights.empty();
    if (defaulted)
        for (int k = 0; k <= level; ++k)
            block_weights.push_back(std::ldexp(1.0, k));
    if (block_weights.size() != static_cast<std::size_t>(level + 1))
        throw Error(ErrorKind::BadWeightSequence, "need one weight per block (level + 1)");
    for (std::size_t k = 0; k < block_weights.size(); ++k) {
        if (!(block_weights[k] > 0.0) || !std::isfinite(block_weights[k]))
            throw Error(ErrorKind::BadWeightSequence, "block weights must be positive");
        if (k > 0 && block_weights[k] < block_weights[k - 1])
            throw Error(ErrorKind::BadWeightSequence, "block weights must be nondecreasing");
    }

    auto sk = vicsek_skeleton(level);
    const auto sizes = vicsek_block_sizes(level);
    bool unit = std::all_of(block_weights.begin(), block_weights.end(), [](double w) { return w == 1.0; });
    for (Edge &e : sk.edges)
        e.weight = block_weights[block_of(e, sizes)];

    BuildOptions options;
    options.root = 0;
    options.meta.family = unit ? "vicsek" : "weighted_vicsek";
    options.meta.params = {{"level", level}};
    if (!unit)
        options.meta.params["weights"] = block_weights;
    options.meta.coords = std::move(sk.coords);
    options.meta.frontier = {sk.cut_vertices.back()};
    options.meta.extra["cut_vertices"] = sk.cut_vertices;
    options.meta.extra["block_sizes"] = sizes;
    return build_graph_with_safe_radius(sk.edges, std::move(options));
}

WeightedGraph stretched_vicsek(int level) {
    auto sk = vicsek_skeleton(level);
    const auto sizes = vicsek_block_sizes(level);

    std::vector<std::pair<std::size_t, Edge>> ordered;
    for (const Edge &e : sk.edges) {
        auto [a, b] = std::minmax(e.u, e.v);
        ordered.push_back({block_of(e, sizes), Edge{a, b, 1.0}});
    }
    std::sort(ordered.begin(), ordered.end(), [](const auto &l, const auto &r) {
        return std::tie(l.first, l.second.u, l.second.v) < std::tie(r.first, r.second.u, r.second.v);
    });

    std::vector<VertexId> remap(sk.coords.size(), static_cast<VertexId>(-1));
    VertexId next = 0;
    auto mapped = [&](VertexId v) {
        if (remap[v] == static_cast<VertexId>(-1))
            remap[v] = next++;
        return remap[v];
    };

    std::vector<Edge> edges;
    for (const auto &[block, e] : ordered) {
        VertexId prev = mapped(e.u);
        const VertexId last = mapped(e.v);
        for (std::size_t k = 0; k < block; ++k) {
            VertexId mid = next++;
            edges.push_back({prev, mid, 1.0});
            prev = mid;
        }
        edges.push_back({prev, last, 1.0});
    }

    std::vector<VertexId> cuts;
    for (VertexId c : sk.cut_vertices)
        cuts.push_back(remap[c]);
    std::vector<int> widths;
    for (int k = 0; k <= level; ++k)
        widths.push_back(k == 0 ? 2 : (k + 1) * 4 * pow3(k - 1));

    BuildOptions options;
    options.root = remap[0];
    options.meta.family = "stretched_vicsek";
    options.meta.params = {{"level", level}};
    options.meta.frontier = {cuts.back()};
    options.meta.extra["cut_vertices"] = cuts;
    options.meta.extra["block_widths"] = widths;
    return build_graph_with_safe_radius(edges, std::move(options));
}

int tree_diameter(const WeightedGraph &g) {
    auto far = [&](VertexId from) {
        auto d = g.distances_from(from);
        auto it = std::max_element(d->begin(), d->end());
        return std::pair{static_cast<VertexId>(it - d->begin()), *it};
    };
    auto [a, da] = far(0);
    (void)da;
    return far(a).second;
}

} // namespace heatlab
