#include "heatlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "heatlab/dirichlet.hpp"
#include "heatlab/error.hpp"
#include "heatlab/spectral.hpp"

namespace heatlab {

namespace {

std::vector<double> transition_on(const WeightedGraph &g, std::span<const double> f, const VertexSet &where) {
    std::vector<double> out(g.vertex_count(), 0.0);
    for (VertexId x : where) {
        double sum = 0.0;
        for (const auto &nb : g.neighbours(x))
            sum += nb.weight * f[nb.vertex];
        out[x] = sum / g.measure(x);
    }
    return out;
}

} // namespace

HarmonicSolution harmonic_potential(const WeightedGraph &g, const VertexSet &a, const VertexSet &b) {
    if (a.empty() || b.empty())
        throw Error(ErrorKind::EmptySet, "resistance needs two nonempty sets");
    if (a.intersects(b))
        throw Error(ErrorKind::SetsIntersect, "resistance needs disjoint sets");

    HarmonicSolution sol;
    sol.source = a;
    sol.sink = b;
    sol.potential.assign(g.vertex_count(), 0.0);
    for (VertexId x : a)
        sol.potential[x] = 1.0;

    const VertexSet interior = complement(g, set_union(a, b));
    if (!interior.empty()) {
        DirichletLaplacian lap(g, interior);
        const auto in_a = a.mask(g);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lap.size()));
        for (std::size_t i = 0; i < lap.size(); ++i)
            for (const auto &nb : g.neighbours(lap.global(i)))
                if (in_a[nb.vertex])
                    rhs[static_cast<Eigen::Index>(i)] += nb.weight;
        Eigen::VectorXd f = lap.solve(rhs);
        for (std::size_t i = 0; i < lap.size(); ++i)
            sol.potential[lap.global(i)] = std::clamp(f[static_cast<Eigen::Index>(i)], 0.0, 1.0);
        auto pf = transition_on(g, sol.potential, interior);
        for (VertexId x : interior)
            sol.residual = std::max(sol.residual, std::abs(pf[x] - sol.potential[x]));
    }
    sol.energy = dirichlet_energy(g, sol.potential);
    if (!(sol.energy > 0.0))
        throw Error(ErrorKind::NoSeparation, "zero energy between the sets");
    return sol;
}

namespace {

double least_squares_slope(const std::vector<double> &xs, const std::vector<double> &ys, double *rms) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    if (rms) {
        double ss = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (my + slope * (xs[i] - mx));
            ss += r * r;
        }
        *rms = std::sqrt(ss / n);
    }
    return slope;
}

// Incremental ball growth around x: vertices ordered by distance.
struct Shells {
    std::vector<VertexId> order;
    std::vector<std::size_t> end_of; // end_of[R] = |B(x,R)| for R = 0..
};

Shells shells(const WeightedGraph &g, VertexId x) {
    auto dist = g.distances_from(x);
    Shells s;
    s.order.resize(g.vertex_count());
    std::iota(s.order.begin(), s.order.end(), VertexId{0});
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](VertexId l, VertexId r) { return (*dist)[l] < (*dist)[r]; });
    s.end_of.push_back(0);
    std::size_t i = 0;
    for (int R = 1;; ++R) {
        while (i < s.order.size() && (*dist)[s.order[i]] < R)
            ++i;
        s.end_of.push_back(i);
        if (i == s.order.size())
            break;
    }
    return s;
}

double exit_time_of_ball(const WeightedGraph &g, const Shells &s, VertexId x, int R) {
    std::vector<VertexId> members(s.order.begin(), s.order.begin() + static_cast<long>(s.end_of[R]));
    return mean_exit_time(g, VertexSet(std::move(members)), x);
}

} // namespace

double effective_resistance(const WeightedGraph &g, const VertexSet &a, const VertexSet &b) {
    return 1.0 / harmonic_potential(g, a, b).energy;
}

double annulus_resistance(const WeightedGraph &g, VertexId x, int r, int R) {
    if (!(0 < r && r < R))
        throw Error(ErrorKind::RadiusOrder, "annulus resistance needs 0 < r < R");
    require_horizon(g, x, R, "annulus_resistance");
    const VertexSet outer = ball(g, x, R);
    if (outer.size() == g.vertex_count())
        throw Error(ErrorKind::NoSeparation, "B(x,R) covers the whole graph");
    return effective_resistance(g, ball(g, x, r), complement(g, outer));
}

std::vector<double> exit_times(const WeightedGraph &g, const VertexSet &a) {
    DirichletLaplacian lap(g, a);
    // (I - P^A) u = 1  <=>  L_A u = mu_A
    Eigen::VectorXd u = lap.solve(lap.measure_vector());
    std::vector<double> out(g.vertex_count(), 0.0);
    for (std::size_t i = 0; i < lap.size(); ++i)
        out[lap.global(i)] = u[static_cast<Eigen::Index>(i)];
    return out;
}

double mean_exit_time(const WeightedGraph &g, const VertexSet &a, VertexId x) {
    if (!a.contains(x))
        throw Error(ErrorKind::SourceOutsideSet, "exit time source must lie in the set");
    return exit_times(g, a)[x];
}

std::pair<double, VertexId> extreme_exit_time(const WeightedGraph &g, const VertexSet &a) {
    if (a.empty())
        throw Error(ErrorKind::EmptySet, "extreme exit time of an empty set");
    const auto u = exit_times(g, a);
    std::pair<double, VertexId> best{-1.0, 0};
    for (VertexId y : a)
        if (u[y] > best.first)
            best = {u[y], y};
    return best;
}

BetaFit fit_beta(std::span<const double> table) {
    BetaFit fit;
    std::vector<double> xs, ys;
    const int rmax = static_cast<int>(table.size()) - 1;
    for (int R = 2; R <= rmax; R *= 2) {
        xs.push_back(std::log(R));
        ys.push_back(std::log(table[static_cast<std::size_t>(R)]));
    }
    for (int R = 1; 2 * R <= rmax; R *= 2)
        fit.local_slopes.push_back(
            {R, std::log2(table[static_cast<std::size_t>(2 * R)] / table[static_cast<std::size_t>(R)])});

    const double nan = std::numeric_limits<double>::quiet_NaN();
    fit.beta = xs.size() >= 2 ? least_squares_slope(xs, ys, &fit.residual) : nan;
    if (xs.size() < 2)
        fit.residual = nan;
    // R = 1 is a boundary effect (E(x,1) = 1 on simple graphs), so the local minimum starts at R = 2.
    fit.beta_prime = nan;
    for (const auto &[R, slope] : fit.local_slopes)
        if (R >= 2 && !(fit.beta_prime <= slope))
            fit.beta_prime = slope;
    return fit;
}

namespace {

ExitProfile finish_profile(VertexId x, std::vector<double> table, double q) {
    for (std::size_t R = 1; R < table.size(); ++R)
        if (!(table[R] > table[R - 1]))
            throw Error(ErrorKind::SolverFailure, "exit profile is not strictly increasing at R = " +
                                                      std::to_string(R));
    ExitProfile p;
    p.center = x;
    p.q = q;
    p.fit = fit_beta(table);
    p.table = std::move(table);
    return p;
}

} // namespace

ExitProfile exit_profile(const WeightedGraph &g, VertexId x, int rmax, double q) {
    if (rmax < 0)
        throw Error(ErrorKind::BadParameter, "rmax must be >= 0");
    if (!(q > 0))
        throw Error(ErrorKind::BadParameter, "q must be positive");
    require_horizon(g, x, rmax, "exit_profile");
    const Shells s = shells(g, x);
    if (rmax >= 1 && static_cast<std::size_t>(rmax) >= s.end_of.size() - 1)
        throw Error(ErrorKind::HorizonExceeded, "B(x,rmax) covers the whole finite graph");
    std::vector<double> table{0.0};
    for (int R = 1; R <= rmax; ++R)
        table.push_back(exit_time_of_ball(g, s, x, R));
    return finish_profile(x, std::move(table), q);
}

ExitProfile exit_profile_until(const WeightedGraph &g, VertexId x, double n, double q) {
    if (!(q > 0))
        throw Error(ErrorKind::BadParameter, "q must be positive");
    const Shells s = shells(g, x);
    const int h = g.horizon(x);
    std::vector<double> table{0.0};
    for (int R = 1; !exit_at_least(table.back(), n); ++R) {
        if (R > h)
            throw Error(ErrorKind::HorizonExceeded, "exit profile reached the frontier before E >= " +
                                                        std::to_string(n));
        if (static_cast<std::size_t>(R) >= s.end_of.size() - 1)
            throw Error(ErrorKind::BeyondProfile, "ball covers the whole finite graph before E >= " +
                                                      std::to_string(n));
        table.push_back(exit_time_of_ball(g, s, x, R));
    }
    return finish_profile(x, std::move(table), q);
}

int inverse_exit(const ExitProfile &profile, double n) {
    auto it = std::find_if(profile.table.begin(), profile.table.end(), [&](double e) { return exit_at_least(e, n); });
    if (it == profile.table.end())
        throw Error(ErrorKind::BeyondProfile, "n exceeds E(x, rmax)");
    return static_cast<int>(it - profile.table.begin());
}

int subgaussian_k(std::span<const double> table, long n, int R, double q) {
    if (n < 1 || R < 1)
        throw Error(ErrorKind::BadParameter, "subgaussian_k needs n, R >= 1");
    if (table.size() <= static_cast<std::size_t>(R))
        throw Error(ErrorKind::BeyondProfile, "exit profile shorter than R");
    int best = 0;
    for (int k = 1; k <= R; ++k)
        if (exit_at_least(q * table[static_cast<std::size_t>(R / k)], static_cast<double>(n) / k))
            best = k;
    return best;
}

int subgaussian_k(const ExitProfile &profile, long n, int R, double q) { return subgaussian_k(profile.table, n, R, q); }

int exit_anti_doubling(const ExitProfile &profile, int R) {
    const double target = 2.0 * profile.at(R);
    for (int a = 2; a * R <= profile.rmax(); ++a)
        if (exit_at_least(profile.at(a * R), target))
            return a;
    return -1;
}

std::shared_ptr<const ExitProfile> ProfileCache::get(VertexId z, int rmax) {
    {
        std::lock_guard lock(mutex_);
        auto it = profiles_.find(z);
        if (it != profiles_.end() && it->second->rmax() >= rmax)
            return it->second;
    }
    auto fresh = std::make_shared<const ExitProfile>(exit_profile(*graph_, z, rmax, q_));
    std::lock_guard lock(mutex_);
    auto &slot = profiles_[z];
    if (!slot || slot->rmax() < fresh->rmax())
        slot = fresh;
    return slot;
}

int subgaussian_kernel(ProfileCache &cache, VertexId x, long n, int R) {
    int best = std::numeric_limits<int>::max();
    for (VertexId z : ball(cache.graph(), x, R))
        best = std::min(best, subgaussian_k(*cache.get(z, R), n, R, cache.q()));
    return best;
}

int kappa(ProfileCache &cache, long n, const VertexSet &a, const VertexSet &b) {
    if (a.intersects(b))
        throw Error(ErrorKind::SetsIntersect, "kappa needs disjoint sets");
    const int d = set_distance(cache.graph(), a, b);
    auto one_side = [&](const VertexSet &s) {
        int best = std::numeric_limits<int>::max();
        for (VertexId z : s)
            best = std::min(best, subgaussian_k(*cache.get(z, d), n, d, cache.q()));
        return best;
    };
    return std::max(one_side(a), one_side(b));
}

ScaleComparison compare_scale(const WeightedGraph &g, VertexId x, int R) {
    require_horizon(g, x, 2 * R, "compare_scale");
    const VertexSet b2 = ball(g, x, 2 * R);
    ScaleComparison c;
    c.inverse_lambda = 1.0 / lambda_min(g, b2).value;
    const auto u = exit_times(g, b2);
    c.exit_time = u[x];
    for (VertexId y : b2)
        c.extreme_exit = std::max(c.extreme_exit, u[y]);
    c.resistance_volume = annulus_resistance(g, x, R, 2 * R) * annulus_volume(g, x, R, 2 * R);
    const double v[] = {c.inverse_lambda, c.exit_time, c.extreme_exit, c.resistance_volume};
    for (double p : v)
        for (double q : v)
            c.max_ratio = std::max(c.max_ratio, p / q);
    return c;
}

double lambda_resistance_product(const WeightedGraph &g, const VertexSet &a, const VertexSet &b) {
    if (!a.is_subset_of(b))
        throw Error(ErrorKind::BadParameter, "A must lie inside B");
    return lambda_min(g, b).value * effective_resistance(g, a, complement(g, b)) * a.measure(g);
}

} // namespace heatlab
