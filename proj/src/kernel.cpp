#include "heatlab/kernel.hpp"

#include <algorithm>
#include <deque>

#include "heatlab/dirichlet.hpp"
#include "heatlab/error.hpp"

namespace heatlab {

double KernelSlice::mass(const WeightedGraph &g) const {
    double sum = 0.0;
    for (VertexId y = 0; y < values.size(); ++y)
        sum += values[y] * g.measure(y);
    return sum;
}

std::vector<double> transition_step(const WeightedGraph &g, std::span<const double> f) {
    if (f.size() != g.vertex_count())
        throw Error(ErrorKind::BadParameter, "function length does not match the graph");
    std::vector<double> out(g.vertex_count());
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        double sum = 0.0;
        for (const auto &nb : g.neighbours(x))
            sum += nb.weight * f[nb.vertex];
        out[x] = sum / g.measure(x);
    }
    return out;
}

void killed_step(const WeightedGraph &g, std::span<const char> inside, std::span<const double> f,
                 std::span<double> out) {
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        if (!inside[x]) {
            out[x] = 0.0;
            continue;
        }
        double sum = 0.0;
        for (const auto &nb : g.neighbours(x))
            if (inside[nb.vertex])
                sum += nb.weight * f[nb.vertex];
        out[x] = sum / g.measure(x);
    }
}

KernelEvolution::KernelEvolution(const WeightedGraph &g, std::vector<double> initial,
                                 std::optional<VertexSet> killed_on)
    : graph_(&g), current_(std::move(initial)), scratch_(g.vertex_count(), 0.0) {
    if (current_.size() != g.vertex_count())
        throw Error(ErrorKind::BadParameter, "initial data length does not match the graph");
    if (killed_on) {
        killed_ = true;
        inside_ = killed_on->mask(g);
        for (VertexId x = 0; x < g.vertex_count(); ++x)
            if (!inside_[x])
                current_[x] = 0.0;
    }
}

KernelEvolution KernelEvolution::from_source(const WeightedGraph &g, VertexId x,
                                             std::optional<VertexSet> killed_on) {
    if (!g.contains(x))
        throw Error(ErrorKind::InvalidVertex, "source out of range");
    std::vector<double> h(g.vertex_count(), 0.0);
    h[x] = 1.0 / g.measure(x);
    return KernelEvolution(g, std::move(h), std::move(killed_on));
}

void KernelEvolution::step() {
    const WeightedGraph &g = *graph_;
    if (killed_) {
        killed_step(g, inside_, current_, scratch_);
    } else {
        for (VertexId x = 0; x < g.vertex_count(); ++x) {
            double sum = 0.0;
            for (const auto &nb : g.neighbours(x))
                sum += nb.weight * current_[nb.vertex];
            scratch_[x] = sum / g.measure(x);
        }
    }
    current_.swap(scratch_);
    ++time_;
}

void KernelEvolution::advance_to(int time) {
    while (time_ < time)
        step();
}

KernelSlice heat_kernel(const WeightedGraph &g, VertexId x, int n, Horizon policy) {
    if (n < 0)
        throw Error(ErrorKind::BadParameter, "time must be nonnegative");
    if (policy == Horizon::Exact)
        require_horizon(g, x, n + 1, "heat_kernel"); // the row reaches distance n, whose measure must be untruncated
    auto evo = KernelEvolution::from_source(g, x);
    evo.advance_to(n);
    return {x, n, {evo.values().begin(), evo.values().end()}, std::nullopt};
}

KernelSlice killed_kernel(const WeightedGraph &g, const VertexSet &a, VertexId x, int n) {
    if (!a.contains(x))
        throw Error(ErrorKind::SourceOutsideSet, "killed kernel source must lie in the set");
    if (n < 0)
        throw Error(ErrorKind::BadParameter, "time must be nonnegative");
    auto evo = KernelEvolution::from_source(g, x, a);
    evo.advance_to(n);
    return {x, n, {evo.values().begin(), evo.values().end()}, a};
}

std::vector<double> green_function(const WeightedGraph &g, const VertexSet &a, VertexId y) {
    if (!a.contains(y))
        throw Error(ErrorKind::SourceOutsideSet, "Green function source must lie in the set");
    DirichletLaplacian lap(g, a);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lap.size()));
    rhs[static_cast<Eigen::Index>(*lap.local(y))] = 1.0;
    // L_A^{-1} is the Green kernel g^A; G^A(y,z) = g^A(y,z) mu(z).
    Eigen::VectorXd kernel = lap.solve(rhs);
    std::vector<double> row(g.vertex_count(), 0.0);
    for (std::size_t i = 0; i < lap.size(); ++i) {
        const VertexId z = lap.global(i);
        row[z] = kernel[static_cast<Eigen::Index>(i)] * g.measure(z);
    }
    return row;
}

std::vector<double> exit_probabilities(const WeightedGraph &g, VertexId x, int radius, int n_max) {
    if (radius < 1)
        throw Error(ErrorKind::BadParameter, "exit radius must be >= 1");
    if (n_max < 1)
        throw Error(ErrorKind::BadParameter, "exit time bound must be >= 1");
    require_horizon(g, x, radius, "survival_probability");
    const VertexSet b = ball(g, x, radius);
    auto evo = KernelEvolution::from_source(g, x, b);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        evo.advance_to(n - 1);
        double alive = 0.0;
        for (VertexId y : b)
            alive += evo.values()[y] * g.measure(y);
        out.push_back(std::clamp(1.0 - alive, 0.0, 1.0));
    }
    return out;
}

double survival_probability(const WeightedGraph &g, VertexId x, int radius, int n) {
    return exit_probabilities(g, x, radius, n).back();
}

std::optional<std::vector<int>> bipartition(const WeightedGraph &g) {
    if (g.has_self_loops())
        return std::nullopt;
    std::vector<int> colour(g.vertex_count(), -1);
    std::deque<VertexId> queue{0};
    colour[0] = 0;
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        for (const auto &nb : g.neighbours(x)) {
            if (colour[nb.vertex] < 0) {
                colour[nb.vertex] = 1 - colour[x];
                queue.push_back(nb.vertex);
            } else if (colour[nb.vertex] == colour[x]) {
                return std::nullopt;
            }
        }
    }
    return colour;
}

std::optional<VertexId> TwoStepGraph::to_local(VertexId original) const {
    if (original >= local_id.size() || local_id[original] < 0)
        return std::nullopt;
    return static_cast<VertexId>(local_id[original]);
}

double TwoStepGraph::min_return_probability() const {
    double best = 1.0;
    for (VertexId x = 0; x < graph.vertex_count(); ++x)
        best = std::min(best, graph.self_loop_weight(x) / graph.measure(x));
    return best;
}

double TwoStepGraph::min_return_density() const {
    double best = std::numeric_limits<double>::infinity();
    for (VertexId x = 0; x < graph.vertex_count(); ++x)
        best = std::min(best, graph.self_loop_weight(x) / (graph.measure(x) * graph.measure(x)));
    return best;
}

TwoStepGraph two_step_graph(const WeightedGraph &g) {
    TwoStepGraph result;
    const std::size_t n = g.vertex_count();
    const VertexId root = g.root_or_zero();
    auto colours = bipartition(g);
    result.bipartite = colours.has_value();
    result.parity = result.bipartite ? (*colours)[root] : 0;

    result.local_id.assign(n, -1);
    for (VertexId x = 0; x < n; ++x) {
        if (!result.bipartite || (*colours)[x] == result.parity) {
            result.local_id[x] = static_cast<long>(result.original_id.size());
            result.original_id.push_back(x);
        }
    }

    // mu*_xy = sum_z mu_xz mu_zy / mu(z), computed once per unordered pair.
    std::vector<Edge> edges;
    std::vector<double> acc(n, 0.0);
    std::vector<VertexId> touched;
    for (VertexId x : result.original_id) {
        for (const auto &xz : g.neighbours(x)) {
            const double factor = xz.weight / g.measure(xz.vertex);
            for (const auto &zy : g.neighbours(xz.vertex)) {
                if (zy.vertex < x)
                    continue;
                if (acc[zy.vertex] == 0.0)
                    touched.push_back(zy.vertex);
                acc[zy.vertex] += factor * zy.weight;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (VertexId y : touched) {
            edges.push_back({static_cast<VertexId>(result.local_id[x]),
                             static_cast<VertexId>(result.local_id[y]), acc[y]});
            acc[y] = 0.0;
        }
        touched.clear();
    }

    BuildOptions options;
    options.allow_self_loops = true;
    options.root = static_cast<VertexId>(result.local_id[root]);
    options.meta.family = "two_step";
    options.meta.params = {{"base", g.id()}};
    if (!g.meta().frontier.empty()) {
        for (VertexId x : result.original_id)
            if (g.horizon(x) <= 1)
                options.meta.frontier.push_back(static_cast<VertexId>(result.local_id[x]));
    }
    options.meta.extra["bipartite"] = result.bipartite;
    options.meta.extra["parity"] = result.parity;
    options.meta.extra["original_ids"] = result.original_id;
    result.graph = build_graph_with_safe_radius(edges, std::move(options));
    return result;
}

} // namespace heatlab
