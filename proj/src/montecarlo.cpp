#include "heatlab/montecarlo.hpp"

#include <cmath>

#include "heatlab/error.hpp"
#include "heatlab/parallel.hpp"

namespace heatlab {

AliasTable::AliasTable(const std::vector<double> &weights) {
    const std::size_t n = weights.size();
    if (n == 0)
        throw Error(ErrorKind::BadParameter, "alias table needs at least one weight");
    double total = 0.0;
    for (double w : weights)
        total += w;
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back(), l = large.back();
        small.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] -= 1.0 - scaled[s];
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::uint32_t i : large)
        prob_[i] = 1.0;
    for (std::uint32_t i : small) // only rounding leftovers
        prob_[i] = 1.0;
}

std::size_t AliasTable::sample(std::mt19937_64 &rng) const {
    std::uniform_int_distribution<std::size_t> column(0, prob_.size() - 1);
    const std::size_t i = column(rng);
    return std::generate_canonical<double, 53>(rng) < prob_[i] ? i : alias_[i];
}

WalkSampler::WalkSampler(const WeightedGraph &g) : graph_(&g) {
    tables_.reserve(g.vertex_count());
    for (VertexId x = 0; x < g.vertex_count(); ++x) {
        std::vector<double> w;
        for (const auto &nb : g.neighbours(x))
            w.push_back(nb.weight);
        tables_.emplace_back(w);
    }
}

VertexId WalkSampler::step(VertexId x, std::mt19937_64 &rng) const {
    return graph_->neighbours(x)[tables_[x].sample(rng)].vertex;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

double pairwise_sum(const double *values, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += values[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

namespace {

SimResult summarise(const std::vector<double> &samples, std::uint64_t seed, bool binomial) {
    SimResult r;
    r.trials = static_cast<long>(samples.size());
    r.seed = seed;
    const double n = static_cast<double>(samples.size());
    r.estimate = pairwise_sum(samples.data(), samples.size()) / n;
    if (binomial) {
        r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / n);
    } else if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            sq[i] = (samples[i] - r.estimate) * (samples[i] - r.estimate);
        r.std_error = std::sqrt(pairwise_sum(sq.data(), sq.size()) / (n - 1.0)) / std::sqrt(n);
    }
    return r;
}

} // namespace

SimResult simulate_exit(const WeightedGraph &g, const VertexSet &a, VertexId x, long trials, std::uint64_t seed) {
    if (!a.contains(x))
        throw Error(ErrorKind::SourceOutsideSet, "simulation must start inside the set");
    if (trials < 1)
        throw Error(ErrorKind::BadParameter, "need at least one trial");
    if (a.size() >= g.vertex_count())
        throw Error(ErrorKind::AbsorbingSet, "the walk never leaves the whole graph");
    const WalkSampler walk(g);
    const auto inside = a.mask(g);
    std::vector<double> samples(static_cast<std::size_t>(trials));
    parallel_for(samples.size(), [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        VertexId v = x;
        long steps = 0;
        do {
            v = walk.step(v, rng);
            ++steps;
        } while (inside[v]);
        samples[t] = static_cast<double>(steps);
    });
    return summarise(samples, seed, false);
}

SimResult simulate_tail(const WeightedGraph &g, VertexId x, int radius, int n, long trials, std::uint64_t seed) {
    if (radius < 1 || n < 1)
        throw Error(ErrorKind::BadParameter, "simulate_tail needs R, n >= 1");
    if (trials < 1)
        throw Error(ErrorKind::BadParameter, "need at least one trial");
    require_horizon(g, x, radius, "simulate_tail");
    const WalkSampler walk(g);
    auto dist = g.distances_from(x);
    std::vector<double> samples(static_cast<std::size_t>(trials));
    parallel_for(samples.size(), [&](std::size_t t) {
        auto rng = trial_rng(seed, t);
        VertexId v = x;
        double hit = 0.0;
        // T < n means the walk is outside B(x,R) after at most n - 1 steps.
        for (int step = 1; step < n; ++step) {
            v = walk.step(v, rng);
            if ((*dist)[v] >= radius) {
                hit = 1.0;
                break;
            }
        }
        samples[t] = hit;
    });
    return summarise(samples, seed, true);
}

} // namespace heatlab
