#include "heatlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "heatlab/error.hpp"

namespace heatlab {

class DistanceCache {
public:
    std::mutex mutex;
    std::unordered_map<VertexId, std::shared_ptr<const std::vector<int>>> rows;
    std::shared_ptr<const std::vector<int>> frontier;
};

namespace {

std::vector<int> bfs(const WeightedGraph &g, std::span<const VertexId> sources, int max_depth) {
    std::vector<int> dist(g.vertex_count(), kInfiniteDistance);
    std::deque<VertexId> queue;
    for (VertexId s : sources) {
        if (dist[s] != 0) {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        if (dist[x] >= max_depth)
            continue;
        for (const auto &nb : g.neighbours(x)) {
            if (dist[nb.vertex] == kInfiniteDistance) {
                dist[nb.vertex] = dist[x] + 1;
                queue.push_back(nb.vertex);
            }
        }
    }
    return dist;
}

} // namespace

double WeightedGraph::weight(VertexId x, VertexId y) const noexcept {
    auto row = neighbours(x);
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const Neighbour &nb, VertexId v) { return nb.vertex < v; });
    if (it != row.end() && it->vertex == y)
        return it->weight;
    return 0.0;
}

std::shared_ptr<const std::vector<int>> WeightedGraph::distances_from(VertexId source) const {
    {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->rows.find(source);
        if (it != cache_->rows.end())
            return it->second;
    }
    VertexId src[] = {source};
    auto row = std::make_shared<const std::vector<int>>(bfs(*this, src, kInfiniteDistance));
    std::lock_guard lock(cache_->mutex);
    return cache_->rows.emplace(source, std::move(row)).first->second;
}

int WeightedGraph::distance(VertexId x, VertexId y) const { return (*distances_from(x))[y]; }

int WeightedGraph::horizon(VertexId x) const {
    if (meta_.frontier.empty())
        return kInfiniteDistance;
    std::shared_ptr<const std::vector<int>> row;
    {
        std::lock_guard lock(cache_->mutex);
        row = cache_->frontier;
    }
    if (!row) {
        row = std::make_shared<const std::vector<int>>(bfs(*this, meta_.frontier, kInfiniteDistance));
        std::lock_guard lock(cache_->mutex);
        cache_->frontier = row;
    }
    return (*row)[x];
}

std::string WeightedGraph::id() const {
    std::ostringstream out;
    out << meta_.family << "(";
    bool first = true;
    for (auto it = meta_.params.begin(); it != meta_.params.end(); ++it) {
        if (!first)
            out << ",";
        first = false;
        out << it.key() << "=" << it.value().dump();
    }
    out << ")";
    return out.str();
}

WeightedGraph build_graph(std::span<const Edge> edges, BuildOptions options) {
    if (edges.empty())
        throw Error(ErrorKind::EmptyEdgeList, "graph needs at least one edge");

    std::map<std::pair<VertexId, VertexId>, double> canonical;
    VertexId max_id = 0;
    for (const Edge &e : edges) {
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw Error(ErrorKind::NonPositiveWeight, "edge (" + std::to_string(e.u) + "," +
                                                          std::to_string(e.v) + ") has weight " +
                                                          std::to_string(e.weight));
        if (e.u == e.v && !options.allow_self_loops)
            throw Error(ErrorKind::SelfLoopDisabled, "self-loop at " + std::to_string(e.u));
        auto key = std::minmax(e.u, e.v);
        auto [it, inserted] = canonical.emplace(std::pair{key.first, key.second}, e.weight);
        if (!inserted && it->second != e.weight)
            throw Error(ErrorKind::ConflictingWeight, "edge (" + std::to_string(key.first) + "," +
                                                          std::to_string(key.second) +
                                                          ") listed with different weights");
        max_id = std::max({max_id, e.u, e.v});
    }

    WeightedGraph g;
    const std::size_t n = static_cast<std::size_t>(max_id) + 1;
    g.edges_.reserve(canonical.size());
    std::vector<std::size_t> degree(n, 0);
    for (const auto &[key, w] : canonical) {
        g.edges_.push_back({key.first, key.second, w});
        ++degree[key.first];
        if (key.first != key.second)
            ++degree[key.second];
        else
            g.has_self_loops_ = true;
    }

    g.offsets_.assign(n + 1, 0);
    for (std::size_t x = 0; x < n; ++x)
        g.offsets_[x + 1] = g.offsets_[x] + degree[x];
    g.adjacency_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge &e : g.edges_) {
        g.adjacency_[fill[e.u]++] = {e.v, e.weight};
        if (e.u != e.v)
            g.adjacency_[fill[e.v]++] = {e.u, e.weight};
    }
    for (std::size_t x = 0; x < n; ++x)
        std::sort(g.adjacency_.begin() + g.offsets_[x], g.adjacency_.begin() + g.offsets_[x + 1],
                  [](const Neighbour &a, const Neighbour &b) { return a.vertex < b.vertex; });

    g.measure_.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        if (degree[x] == 0)
            throw Error(ErrorKind::DisconnectedGraph, "vertex " + std::to_string(x) + " is isolated");
        double sum = 0.0;
        for (std::size_t k = g.offsets_[x]; k < g.offsets_[x + 1]; ++k)
            sum += g.adjacency_[k].weight;
        g.measure_[x] = sum;
    }
    g.total_measure_ = std::accumulate(g.measure_.begin(), g.measure_.end(), 0.0);

    g.cache_ = std::make_shared<DistanceCache>();
    VertexId origin[] = {0};
    auto reach = bfs(g, origin, kInfiniteDistance);
    for (std::size_t x = 0; x < n; ++x)
        if (reach[x] == kInfiniteDistance)
            throw Error(ErrorKind::DisconnectedGraph,
                        "vertex " + std::to_string(x) + " is not reachable from vertex 0");

    if (options.root && *options.root >= n)
        throw Error(ErrorKind::InvalidVertex, "root out of range");
    for (VertexId f : options.meta.frontier)
        if (f >= n)
            throw Error(ErrorKind::InvalidVertex, "frontier vertex out of range");
    g.root_ = options.root;
    g.meta_ = std::move(options.meta);
    return g;
}

WeightedGraph build_graph_with_safe_radius(std::span<const Edge> edges, BuildOptions options) {
    auto probe = build_graph(edges, options);
    const int h = probe.horizon(probe.root_or_zero());
    options.meta.safe_radius = h == kInfiniteDistance ? -1 : std::max(0, (h - 1) / 3);
    return build_graph(edges, std::move(options));
}

VertexSet::VertexSet(std::vector<VertexId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

VertexSet VertexSet::whole(const WeightedGraph &g) {
    std::vector<VertexId> all(g.vertex_count());
    std::iota(all.begin(), all.end(), VertexId{0});
    return VertexSet(std::move(all));
}

bool VertexSet::contains(VertexId x) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), x);
}

bool VertexSet::is_subset_of(const VertexSet &other) const {
    return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

bool VertexSet::intersects(const VertexSet &other) const {
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a == *b)
            return true;
        if (*a < *b)
            ++a;
        else
            ++b;
    }
    return false;
}

double VertexSet::measure(const WeightedGraph &g) const {
    double sum = 0.0;
    for (VertexId x : members_)
        sum += g.measure(x);
    return sum;
}

std::vector<char> VertexSet::mask(const WeightedGraph &g) const {
    std::vector<char> m(g.vertex_count(), 0);
    for (VertexId x : members_) {
        if (x >= g.vertex_count())
            throw Error(ErrorKind::InvalidVertex, "set member " + std::to_string(x) + " out of range");
        m[x] = 1;
    }
    return m;
}

VertexSet set_union(const VertexSet &a, const VertexSet &b) {
    std::vector<VertexId> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

VertexSet set_difference(const VertexSet &a, const VertexSet &b) {
    std::vector<VertexId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return VertexSet(std::move(out));
}

VertexSet complement(const WeightedGraph &g, const VertexSet &a) {
    return set_difference(VertexSet::whole(g), a);
}

VertexSet ball(const WeightedGraph &g, VertexId x, int radius) {
    if (!g.contains(x))
        throw Error(ErrorKind::InvalidVertex, "ball center out of range");
    if (radius <= 0)
        return {};
    std::vector<VertexId> members{x};
    std::unordered_map<VertexId, int> seen{{x, 0}};
    for (std::size_t head = 0; head < members.size(); ++head) {
        VertexId y = members[head];
        int d = seen[y];
        if (d + 1 >= radius)
            continue;
        for (const auto &nb : g.neighbours(y)) {
            if (seen.emplace(nb.vertex, d + 1).second)
                members.push_back(nb.vertex);
        }
    }
    return VertexSet(std::move(members));
}

double ball_volume(const WeightedGraph &g, VertexId x, int radius) { return ball(g, x, radius).measure(g); }

double annulus_volume(const WeightedGraph &g, VertexId x, int inner, int outer) {
    if (inner > outer)
        throw Error(ErrorKind::RadiusOrder, "annulus needs r <= R");
    if (inner < 0)
        throw Error(ErrorKind::RadiusOrder, "annulus needs r >= 0");
    return ball_volume(g, x, outer) - ball_volume(g, x, inner);
}

VertexSet boundary(const WeightedGraph &g, const VertexSet &a) {
    auto in = a.mask(g);
    std::vector<VertexId> out;
    for (VertexId y : a)
        for (const auto &nb : g.neighbours(y))
            if (!in[nb.vertex])
                out.push_back(nb.vertex);
    return VertexSet(std::move(out));
}

VertexSet closure(const WeightedGraph &g, const VertexSet &a) { return set_union(a, boundary(g, a)); }

int set_distance(const WeightedGraph &g, const VertexSet &a, const VertexSet &b) {
    if (a.empty() || b.empty())
        throw Error(ErrorKind::EmptySet, "distance to an empty set");
    auto dist = bfs(g, a.members(), kInfiniteDistance);
    int best = kInfiniteDistance;
    for (VertexId y : b)
        best = std::min(best, dist[y]);
    return best;
}

void require_horizon(const WeightedGraph &g, VertexId x, int radius, const char *what) {
    int h = g.horizon(x);
    if (h < radius)
        throw Error(ErrorKind::HorizonExceeded, std::string(what) + ": radius/time " +
                                                    std::to_string(radius) + " at vertex " +
                                                    std::to_string(x) + " exceeds horizon " +
                                                    std::to_string(h));
}

void require_inside_horizon(const WeightedGraph &g, const VertexSet &a, const char *what) {
    for (VertexId f : g.meta().frontier)
        if (a.contains(f))
            throw Error(ErrorKind::HorizonExceeded,
                        std::string(what) + ": set touches frontier vertex " + std::to_string(f));
}

P0Report check_p0(const WeightedGraph &g, std::size_t max_pairs, std::uint64_t seed) {
    P0Report report;
    report.p0 = 1.0;
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        report.max_degree = std::max(report.max_degree, g.degree(x));
        for (const auto &nb : g.neighbours(x))
            report.p0 = std::min(report.p0, nb.weight / g.measure(x));
    }
    for (VertexId x = 0; x < g.vertex_count(); ++x)
        if (static_cast<double>(g.degree(x)) > std::floor(1.0 / report.p0 + 1e-12))
            report.degree_bound_holds = false;

    auto check_pair = [&](VertexId x, VertexId y) {
        int d = g.distance(x, y);
        double lhs = std::pow(report.p0, d) * g.measure(y);
        double ratio = lhs / g.measure(x);
        report.worst_mmccmm_ratio = std::max(report.worst_mmccmm_ratio, ratio);
        if (ratio > 1.0 + 1e-12)
            ++report.mmccmm_violations;
        ++report.pairs_checked;
    };

    const std::size_t n = g.vertex_count();
    if (n * n <= max_pairs) {
        for (VertexId x = 0; x < n; ++x)
            for (VertexId y = 0; y < n; ++y)
                check_pair(x, y);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
        // Few distinct sources keep the distance cache small.
        std::vector<VertexId> sources(std::min<std::size_t>(n, 20));
        for (auto &s : sources)
            s = pick(rng);
        for (std::size_t k = 0; k < max_pairs; ++k)
            check_pair(sources[k % sources.size()], pick(rng));
    }
    return report;
}

namespace {

double least_squares_slope(const std::vector<double> &xs, const std::vector<double> &ys, double *residual) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    if (residual) {
        double rss = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double r = ys[i] - (my + slope * (xs[i] - mx));
            rss += r * r;
        }
        *residual = std::sqrt(rss / n);
    }
    return slope;
}

} // namespace

VolumeReport volume_regularity_report(const WeightedGraph &g, std::span<const VertexId> centers,
                                      std::span<const int> radii) {
    VolumeReport report;
    const double p0 = check_p0(g, 0).p0;
    const double vbound_reference = 2.0 / (p0 * p0);
    std::vector<double> log_r, log_v;

    for (int radius : radii) {
        if (radius < 1)
            throw Error(ErrorKind::BadParameter, "volume radii must be positive");
        VolumeScale scale;
        scale.radius = radius;
        scale.v3_ratio_min = std::numeric_limits<double>::infinity();
        bool anti_doubling_missing = false;
        for (VertexId x : centers) {
            require_horizon(g, x, 2 * radius, "volume_regularity_report");
            const double v1 = ball_volume(g, x, radius);
            const double v2 = ball_volume(g, x, 2 * radius);
            scale.doubling = std::max(scale.doubling, v2 / v1);
            scale.v3_ratio_min = std::min(scale.v3_ratio_min, (v2 - v1) / v1);
            for (VertexId y : ball(g, x, radius))
                scale.pd2v = std::max(scale.pd2v, v2 / ball_volume(g, y, radius));

            int found = -1;
            const int limit = std::min(g.horizon(x), 64 * radius);
            for (int a = 2; a * radius <= limit; ++a) {
                if (ball_volume(g, x, a * radius) >= 2.0 * v1) {
                    found = a;
                    break;
                }
            }
            if (found < 0)
                anti_doubling_missing = true;
            else
                scale.anti_doubling = std::max(scale.anti_doubling, found);

            const double c = std::pow(v1 / g.measure(x), 1.0 / radius);
            report.vbound_constant = std::max(report.vbound_constant, c);
            if (v1 > std::pow(vbound_reference, radius) * g.measure(x) * (1 + 1e-12))
                ++report.vbound_violations;

            log_r.push_back(std::log(static_cast<double>(radius)));
            log_v.push_back(std::log(v1));
        }
        if (anti_doubling_missing)
            scale.anti_doubling = -1;
        report.doubling_constant = std::max(report.doubling_constant, scale.doubling);
        report.pd2v_constant = std::max(report.pd2v_constant, scale.pd2v);
        report.scales.push_back(scale);
    }

    report.anti_doubling_constant = 0;
    for (const auto &s : report.scales) {
        if (s.anti_doubling < 0) {
            report.anti_doubling_constant = -1;
            break;
        }
        report.anti_doubling_constant = std::max(report.anti_doubling_constant, s.anti_doubling);
    }
    if (log_r.size() >= 2)
        report.alpha = least_squares_slope(log_r, log_v, &report.alpha_residual);

    if (report.scales.size() >= 2) {
        bool increasing = true;
        for (std::size_t k = 1; k < report.scales.size(); ++k)
            if (report.scales[k].doubling <= report.scales[k - 1].doubling)
                increasing = false;
        report.doubling_unbounded =
            increasing && report.scales.back().doubling >= 2.0 * report.scales.front().doubling;
    }
    return report;
}

} // namespace heatlab
