#include "heatlab/subsets.hpp"

#include <algorithm>
#include <set>

#include "heatlab/error.hpp"

namespace heatlab {

std::string to_string(Provenance p) {
    switch (p) {
    case Provenance::Exhaustive: return "exhaustive";
    case Provenance::Subball: return "subball";
    case Provenance::Annulus: return "annulus";
    case Provenance::BfsRandom: return "bfs_random";
    case Provenance::Given: return "given";
    }
    return "unknown";
}

void SubsetFamily::add(VertexSet s, Provenance p) {
    members.push_back(std::move(s));
    provenance.push_back(p);
}

namespace {

struct Enumerator {
    const WeightedGraph &g;
    std::vector<char> allowed;
    int max_size;
    const std::function<void(const VertexSet &)> &visit;
    std::size_t limit;
    std::size_t count = 0;

    std::vector<VertexId> current;
    // 0 free, 1 in current set, 2 in the extension list, 3 forbidden
    std::vector<char> state;

    void emit() {
        if (++count > limit)
            throw Error(ErrorKind::BudgetTooLarge, "connected subset enumeration exceeds " + std::to_string(limit) + " sets");
        std::vector<VertexId> sorted = current;
        std::sort(sorted.begin(), sorted.end());
        visit(VertexSet(std::move(sorted)));
    }

    // Reverse search over (set, extension list, forbidden). Each connected set through
    // the root appears exactly once: the branch for v holds the sets containing v, and v
    // is forbidden in the later branches of the same loop.
    void grow(std::vector<VertexId> ext) {
        emit();
        if (static_cast<int>(current.size()) == max_size)
            return;
        std::vector<VertexId> popped;
        while (!ext.empty()) {
            const VertexId v = ext.back();
            ext.pop_back();
            state[v] = 1;
            current.push_back(v);
            std::vector<VertexId> next = ext;
            const std::size_t base = next.size();
            for (const auto &nb : g.neighbours(v))
                if (allowed[nb.vertex] && state[nb.vertex] == 0) {
                    state[nb.vertex] = 2;
                    next.push_back(nb.vertex);
                }
            std::vector<VertexId> added(next.begin() + static_cast<long>(base), next.end());
            grow(std::move(next));
            for (VertexId u : added)
                state[u] = 0;
            current.pop_back();
            state[v] = 3;
            popped.push_back(v);
        }
        // Back to the extension list of the caller.
        for (VertexId v : popped)
            state[v] = 2;
    }
};

} // namespace

std::size_t for_each_connected_subset(const WeightedGraph &g, VertexId x, const VertexSet &allowed, int max_size,
                                      const std::function<void(const VertexSet &)> &visit, std::size_t limit) {
    if (!allowed.contains(x))
        throw Error(ErrorKind::SourceOutsideSet, "root must lie in the allowed set");
    if (max_size < 1)
        return 0;
    Enumerator e{g, allowed.mask(g), max_size, visit, limit, 0, {}, {}};
    e.state.assign(g.vertex_count(), 0);
    e.current = {x};
    e.state[x] = 1;
    std::vector<VertexId> ext;
    for (const auto &nb : g.neighbours(x))
        if (e.allowed[nb.vertex] && e.state[nb.vertex] == 0) {
            e.state[nb.vertex] = 2;
            ext.push_back(nb.vertex);
        }
    e.grow(std::move(ext));
    return e.count;
}

std::vector<VertexSet> connected_subsets(const WeightedGraph &g, VertexId x, const VertexSet &allowed, int max_size,
                                         std::size_t limit) {
    std::vector<VertexSet> out;
    for_each_connected_subset(g, x, allowed, max_size, [&](const VertexSet &s) { out.push_back(s); }, limit);
    return out;
}

VertexSet random_connected_set(const WeightedGraph &g, VertexId start, const VertexSet &allowed, std::size_t size,
                               std::mt19937_64 &rng) {
    const auto ok = allowed.mask(g);
    std::vector<char> taken(g.vertex_count(), 0), offered(g.vertex_count(), 0);
    std::vector<VertexId> members{start}, candidates;
    taken[start] = 1;
    auto offer = [&](VertexId v) {
        for (const auto &nb : g.neighbours(v))
            if (ok[nb.vertex] && !taken[nb.vertex] && !offered[nb.vertex]) {
                offered[nb.vertex] = 1;
                candidates.push_back(nb.vertex);
            }
    };
    offer(start);
    while (members.size() < size && !candidates.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const std::size_t i = pick(rng);
        const VertexId v = candidates[i];
        candidates[i] = candidates.back();
        candidates.pop_back();
        taken[v] = 1;
        members.push_back(v);
        offer(v);
    }
    std::sort(members.begin(), members.end());
    return VertexSet(std::move(members));
}

SubsetFamily subset_families(const WeightedGraph &g, VertexId x, int R, const SubsetBudget &budget, int ball_factor) {
    if (R < 1)
        throw Error(ErrorKind::BadParameter, "family radius must be >= 1");
    if (ball_factor < 1)
        throw Error(ErrorKind::BadParameter, "ball factor must be >= 1");
    require_horizon(g, x, ball_factor * R, "subset_families");

    SubsetFamily family;
    family.center = x;
    family.radius = R;
    family.ball_factor = ball_factor;
    family.seed = budget.seed;

    const VertexSet big = ball(g, x, ball_factor * R);
    std::set<VertexSet> seen;
    auto add = [&](VertexSet s, Provenance p) {
        if (s.empty() || !s.is_subset_of(big))
            return;
        if (seen.insert(s).second)
            family.add(std::move(s), p);
    };

    for_each_connected_subset(g, x, big, budget.max_exhaustive_size,
                              [&](const VertexSet &s) { add(s, Provenance::Exhaustive); });

    for (VertexId y : ball(g, x, R))
        for (int r = 1; r <= 2 * R; ++r)
            add(ball(g, y, r), Provenance::Subball);

    const int outer_max = ball_factor * R;
    for (int r1 = 1; r1 < outer_max; ++r1)
        for (int r2 = r1 + 1; r2 <= outer_max; ++r2)
            add(set_difference(ball(g, x, r2), ball(g, x, r1)), Provenance::Annulus);

    std::mt19937_64 rng(budget.seed);
    const auto &pool = big.members();
    for (int i = 0; i < budget.samples; ++i) {
        std::uniform_int_distribution<std::size_t> pick_start(0, pool.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_size(1, pool.size());
        const VertexId start = pool[pick_start(rng)];
        const std::size_t size = pick_size(rng);
        add(random_connected_set(g, start, big, size, rng), Provenance::BfsRandom);
    }
    return family;
}

} // namespace heatlab
