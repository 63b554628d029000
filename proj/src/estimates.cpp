#include "heatlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "heatlab/dirichlet.hpp"
#include "heatlab/error.hpp"
#include "heatlab/montecarlo.hpp"
#include "heatlab/spectral.hpp"
#include "heatlab/subsets.hpp"

namespace heatlab {

using nlohmann::json;

namespace {

json number(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return nullptr;
    return v > 0 ? "inf" : "-inf";
}

// V(x,R) for every R, from one BFS.
class Volumes {
public:
    Volumes(const WeightedGraph &g, VertexId x) {
        auto dist = g.distances_from(x);
        std::vector<double> shell;
        for (VertexId y = 0; y < g.vertex_count(); ++y) {
            const int d = (*dist)[y];
            if (d == kInfiniteDistance)
                continue;
            if (static_cast<std::size_t>(d) >= shell.size())
                shell.resize(static_cast<std::size_t>(d) + 1, 0.0);
            shell[static_cast<std::size_t>(d)] += g.measure(y);
        }
        cumulative_.push_back(0.0);
        for (double s : shell)
            cumulative_.push_back(cumulative_.back() + s);
    }
    double operator()(int R) const {
        return cumulative_[std::min(static_cast<std::size_t>(R), cumulative_.size() - 1)];
    }

private:
    std::vector<double> cumulative_;
};

double exponent_term(double e_xd, double n, double beta) {
    if (e_xd <= 0.0)
        return 0.0;
    return std::pow(e_xd / n, 1.0 / (beta - 1.0));
}

EstimateReport blank(const WeightedGraph &g, const std::string &name) {
    EstimateReport r;
    r.check_name = name;
    r.graph_id = g.id();
    return r;
}

std::string policy_name(Horizon p) { return p == Horizon::Exact ? "exact" : "finite_graph"; }

} // namespace

json to_json(const EstimateReport &r) {
    return {{"check", r.check_name},   {"graph", r.graph_id},       {"sup_statistic", number(r.sup_statistic)},
            {"fitted", {{"C", number(r.fitted_C)}, {"c", number(r.fitted_c)}, {"beta_used", number(r.beta_used)}}},
            {"pass", r.pass},          {"config", r.config},        {"extra", r.extra},
            {"witness", r.witness},    {"grid", r.grid}};
}

ExitProfile profile_covering(const WeightedGraph &g, VertexId x, double n, int r, double q) {
    ExitProfile p = exit_profile_until(g, x, n, q);
    if (p.rmax() < r)
        p = exit_profile(g, x, r, q);
    return p;
}

EstimateReport check_DUE(const WeightedGraph &g, const std::vector<VertexId> &centers, const DueOptions &o) {
    if (o.n_max < 1)
        throw Error(ErrorKind::BadParameter, "n_max must be >= 1");
    auto r = blank(g, "DUE");
    r.config = {{"centers", centers},   {"n_max", o.n_max}, {"band_from", o.band_from},
                {"band_limit", o.band_limit}, {"horizon", policy_name(o.policy)}, {"q", o.q}};
    double even_sup = 0.0, odd_sup = 0.0, worst_band = 0.0;
    json bands = json::array();
    for (VertexId x : centers) {
        // p_n(x,x) only sees vertices within n/2 of x.
        if (o.policy == Horizon::Exact)
            require_horizon(g, x, static_cast<int>(o.n_max / 2 + 1), "check_DUE");
        const ExitProfile profile = exit_profile_until(g, x, static_cast<double>(o.n_max), o.q);
        const Volumes vol(g, x);
        auto evo = KernelEvolution::from_source(g, x);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (long n = 1; n <= o.n_max; ++n) {
            evo.step();
            const double p = evo.values()[x];
            const int e = inverse_exit(profile, static_cast<double>(n));
            const double v = vol(e);
            const double stat = p * v;
            r.grid.push_back({{"x", x}, {"n", n}, {"p", p}, {"e", e}, {"V", v}, {"statistic", stat}});
            if (n % 2 == 0) {
                if (stat > even_sup) {
                    even_sup = stat;
                    r.witness = {{"x", x}, {"n", n}, {"statistic", stat}};
                }
                if (n >= o.band_from) {
                    lo = std::min(lo, stat);
                    hi = std::max(hi, stat);
                }
            } else {
                odd_sup = std::max(odd_sup, stat);
            }
        }
        const double band = hi / lo;
        worst_band = std::max(worst_band, band);
        bands.push_back({{"x", x}, {"even_min", number(lo)}, {"even_max", hi}, {"band_ratio", number(band)}});
        r.beta_used = profile.fit.beta;
    }
    r.sup_statistic = even_sup;
    r.fitted_C = even_sup;
    r.extra = {{"odd_sup", odd_sup}, {"band_ratio", number(worst_band)}, {"per_center", bands}};
    r.pass = std::isfinite(worst_band) && worst_band <= o.band_limit;
    return r;
}

EstimateReport check_UE(const WeightedGraph &g, const std::vector<std::pair<VertexId, VertexId>> &pairs,
                        const UeOptions &o) {
    if (o.n_grid.empty())
        throw Error(ErrorKind::BadParameter, "UE needs a time grid");
    auto r = blank(g, "UE");
    std::vector<long> times = o.n_grid;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    if (times.front() < 1)
        throw Error(ErrorKind::BadParameter, "times must be >= 1");
    json pairs_json = json::array();
    for (auto [x, y] : pairs)
        pairs_json.push_back({x, y});
    r.config = {{"pairs", pairs_json}, {"n_grid", times}, {"c", o.c}, {"c_cap", o.c_cap},
                {"horizon", policy_name(o.policy)}, {"q", o.q}};
    if (o.beta)
        r.config["beta"] = *o.beta;

    std::map<VertexId, std::vector<VertexId>> by_source;
    for (auto [x, y] : pairs)
        by_source[x].push_back(y);

    double sup = 0.0, sup_c0 = 0.0;
    double c_fit = std::numeric_limits<double>::infinity();
    for (const auto &[x, targets] : by_source) {
        if (o.policy == Horizon::Exact)
            require_horizon(g, x, static_cast<int>(times.back() + 1), "check_UE");
        auto dist = g.distances_from(x);
        int dmax = 0;
        for (VertexId y : targets)
            dmax = std::max(dmax, (*dist)[y]);
        const ExitProfile profile = profile_covering(g, x, static_cast<double>(times.back()), dmax, o.q);
        const double beta = o.beta.value_or(profile.fit.beta);
        r.beta_used = beta;
        const Volumes vol(g, x);
        auto evo = KernelEvolution::from_source(g, x);
        for (long n : times) {
            evo.advance_to(static_cast<int>(n));
            const double v = vol(inverse_exit(profile, static_cast<double>(n)));
            for (VertexId y : targets) {
                const int d = (*dist)[y];
                const double p = evo.values()[y];
                const double t = exponent_term(profile.at(d), static_cast<double>(n), beta);
                const double base = p * v;
                const double stat = base * std::exp(o.c * t);
                r.grid.push_back({{"x", x}, {"y", y}, {"n", n}, {"d", d}, {"p", p}, {"V", v}, {"t", t},
                                  {"statistic", stat}});
                sup_c0 = std::max(sup_c0, base);
                if (stat > sup) {
                    sup = stat;
                    r.witness = {{"x", x}, {"y", y}, {"n", n}, {"statistic", stat}};
                }
                if (p > 0 && t > 0)
                    c_fit = std::min(c_fit, std::log(o.c_cap / base) / t);
            }
        }
    }
    r.sup_statistic = sup;
    r.fitted_C = sup;
    r.fitted_c = c_fit;
    r.extra = {{"sup_c0", sup_c0}};
    r.pass = std::isfinite(sup) && sup <= o.c_cap;
    return r;
}

EstimateReport check_DG(const WeightedGraph &g, const std::vector<SetPair> &pairs, const DgOptions &o) {
    if (o.n_grid.empty())
        throw Error(ErrorKind::BadParameter, "DG needs a time grid");
    auto r = blank(g, "DG");
    std::vector<long> times = o.n_grid;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    r.config = {{"n_grid", times}, {"c", o.c}, {"q", o.q}, {"kappa_min", o.kappa_min},
                {"horizon", policy_name(o.policy)}, {"pairs", pairs.size()}};

    ProfileCache cache(g, o.q);
    int violations_c0 = 0, violations_c = 0, kappa_unavailable = 0;
    double worst_c0 = 0.0, admissible = 0.0;
    double c_hat = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto &[a, b] = pairs[i];
        if (a.intersects(b))
            throw Error(ErrorKind::SetsIntersect, "Davies-Gaffney needs disjoint sets");
        if (o.policy == Horizon::Exact)
            for (VertexId x : a)
                require_horizon(g, x, static_cast<int>(times.back()), "check_DG");
        const double mu_a = a.measure(g), mu_b = b.measure(g);
        const double norm = std::sqrt(mu_a * mu_b);
        const int d = set_distance(g, a, b);
        std::vector<double> indicator(g.vertex_count(), 0.0);
        for (VertexId y : b)
            indicator[y] = 1.0;
        // (P^n 1_B)(x) = sum_{y in B} P_n(x,y), so the left side is sum_{x in A} mu(x) (P^n 1_B)(x).
        KernelEvolution evo(g, std::move(indicator));
        for (long n : times) {
            evo.advance_to(static_cast<int>(n));
            double lhs = 0.0;
            for (VertexId x : a)
                lhs += g.measure(x) * evo.values()[x];
            const double ratio = lhs / norm;
            // kappa needs exit profiles; near a frontier they are not available.
            int k = -1;
            try {
                k = kappa(cache, n, a, b);
            } catch (const Error &e) {
                if (e.kind() != ErrorKind::HorizonExceeded && e.kind() != ErrorKind::BeyondProfile)
                    throw;
                ++kappa_unavailable;
            }
            const double log_ratio = std::log(ratio);
            const double slack = lhs > 0 ? log_ratio + o.c * std::max(k, 0) : -std::numeric_limits<double>::infinity();
            r.grid.push_back({{"pair", i}, {"n", n}, {"d", d}, {"lhs", lhs}, {"norm", norm}, {"ratio", ratio},
                              {"kappa", k}, {"log_ratio_plus_ck", number(slack)}});
            worst_c0 = std::max(worst_c0, ratio);
            violations_c0 += ratio > 1.0 + 1e-12;
            if (k >= 0 || o.c == 0.0) {
                violations_c += slack > 1e-12;
                admissible = std::max(admissible, ratio * std::exp(o.c * std::max(k, 0)));
            }
            if (k >= o.kappa_min && lhs > 0) {
                const double c = -log_ratio / k;
                if (c < c_hat) {
                    c_hat = c;
                    r.witness = {{"pair", i}, {"n", n}, {"kappa", k}, {"ratio", ratio}, {"c", c}};
                }
            }
        }
    }
    r.sup_statistic = admissible;
    r.fitted_C = admissible;
    r.fitted_c = c_hat;
    r.extra = {{"violations_c0", violations_c0}, {"violations_configured_c", violations_c}, {"max_ratio", worst_c0},
               {"kappa_unavailable", kappa_unavailable}};
    r.pass = violations_c0 == 0 && violations_c == 0;
    return r;
}

EstimateReport check_exit_tail(const WeightedGraph &g, const std::vector<VertexId> &centers, const TailOptions &o) {
    if (o.radii.empty())
        throw Error(ErrorKind::BadParameter, "exit tail needs radii");
    auto r = blank(g, "tail");
    r.config = {{"centers", centers}, {"radii", o.radii}, {"n_grid", o.n_grid}, {"q", o.q},
                {"max_C", o.max_C}, {"min_c", o.min_c}};
    ProfileCache cache(g, o.q);
    struct Point {
        double tail;
        int k;
    };
    std::vector<Point> points;
    // Exact values are monotone; the sums carry rounding of order 1e-16.
    double defect = 0.0, defect_r = 0.0;
    for (VertexId x : centers) {
        std::map<int, std::vector<double>> tails; // R -> P(T < n), index n - 1
        for (int R : o.radii) {
            std::vector<long> times = o.n_grid;
            if (times.empty())
                for (long n = R; n <= static_cast<long>(R) * R; ++n)
                    times.push_back(n);
            std::sort(times.begin(), times.end());
            const auto probs = exit_probabilities(g, x, R, static_cast<int>(times.back()));
            for (std::size_t i = 1; i < probs.size(); ++i)
                defect = std::max(defect, probs[i - 1] - probs[i]);
            for (long n : times) {
                const double tail = probs[static_cast<std::size_t>(n - 1)];
                const int k = subgaussian_kernel(cache, x, n, R);
                points.push_back({tail, k});
                r.grid.push_back({{"x", x}, {"R", R}, {"n", n}, {"tail", tail}, {"k", k}});
            }
            tails[R] = probs;
        }
        for (auto it = tails.begin(); std::next(it) != tails.end(); ++it) {
            const auto &small = it->second, &large = std::next(it)->second;
            for (std::size_t i = 0; i < std::min(small.size(), large.size()); ++i)
                defect_r = std::max(defect_r, large[i] - small[i]);
        }
    }

    // Least-squares slope of log-tail against k, kept as a diagnostic.
    const bool monotone_n = defect <= 1e-12, monotone_r = defect_r <= 1e-12;
    defect = std::max(defect, defect_r);
    std::vector<double> ks, logs;
    for (const Point &p : points)
        if (p.tail > 0 && p.tail < 1) {
            ks.push_back(p.k);
            logs.push_back(std::log(p.tail));
        }
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (ks.size() >= 2) {
        const double mk = std::accumulate(ks.begin(), ks.end(), 0.0) / static_cast<double>(ks.size());
        const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(ks.size());
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            sxy += (ks[i] - mk) * (logs[i] - ml);
            sxx += (ks[i] - mk) * (ks[i] - mk);
        }
        if (sxx > 0)
            slope = -sxy / sxx;
    }
    // The fitted c is the largest rate with tail <= max_C exp(-c k) at every point;
    // fitted C is then the smallest prefactor that works with it.
    double c = std::numeric_limits<double>::infinity();
    bool prefactor_ok = true;
    for (const Point &p : points) {
        if (p.tail <= 0)
            continue;
        if (p.k == 0)
            prefactor_ok = prefactor_ok && p.tail <= o.max_C;
        else
            c = std::min(c, std::log(o.max_C / p.tail) / p.k);
    }
    // With no usable k > 0 point, c is unbounded and only the k = 0 points constrain C.
    double big_c = 0.0;
    for (const Point &p : points)
        if (p.tail > 0 && (p.k == 0 || std::isfinite(c)))
            big_c = std::max(big_c, p.k == 0 ? p.tail : p.tail * std::exp(c * p.k));
    r.fitted_c = c;
    r.fitted_C = big_c;
    r.sup_statistic = big_c;
    r.extra = {{"monotone_in_n", monotone_n}, {"nonincreasing_in_R", monotone_r},
               {"largest_monotonicity_defect", defect}, {"least_squares_rate", number(slope)},
               {"fit_points", ks.size()}, {"points", points.size()}};
    r.pass = monotone_n && monotone_r && prefactor_ok && c >= o.min_c && big_c <= o.max_C * (1 + 1e-12);
    return r;
}

EstimateReport check_PMV(const WeightedGraph &g, VertexId x, int R, const PmvOptions &o) {
    if (!(0 < o.c1 && o.c1 < o.c2))
        throw Error(ErrorKind::BadConstants, "PMV needs 0 < c1 < c2");
    auto r = blank(g, "PMV");
    r.config = {{"x", x}, {"R", R}, {"c1", o.c1}, {"c2", o.c2}, {"random_trials", o.random_trials},
                {"seed", o.seed}, {"q", o.q}};
    const ExitProfile profile = exit_profile(g, x, R, o.q);
    const double e = profile.at(R);
    const long n = static_cast<long>(std::floor(o.c2 * e * (1 + kExitSlack)));
    const long i_lo = static_cast<long>(std::ceil(o.c1 * e * (1 - kExitSlack)));
    const VertexSet b = ball(g, x, R);
    const double v = b.measure(g);

    auto admissible = [&](std::vector<double> u0) {
        KernelEvolution evo(g, std::move(u0), b);
        double sum = 0.0;
        for (long i = 0; i <= n; ++i) {
            if (i > 0)
                evo.step();
            if (i >= i_lo)
                for (VertexId y : b)
                    sum += evo.values()[y] * g.measure(y);
        }
        const double lhs = evo.values()[x];
        return std::pair{lhs, sum};
    };

    double delta_max = 0.0, random_max = 0.0;
    std::vector<double> worst_data;
    int excluded = 0;
    auto consider = [&](std::vector<double> u0, const json &label, double &slot) {
        auto [lhs, sum] = admissible(u0);
        if (sum <= 0.0) {
            ++excluded;
            return;
        }
        const double c = lhs * e * v / sum;
        r.grid.push_back({{"trial", label}, {"lhs", lhs}, {"sum", sum}, {"C", c}});
        slot = std::max(slot, c);
        if (c >= r.sup_statistic) {
            r.sup_statistic = c;
            r.witness = {{"trial", label}, {"C", c}};
            worst_data = std::move(u0);
        }
    };
    for (VertexId y : b) {
        std::vector<double> u0(g.vertex_count(), 0.0);
        u0[y] = 1.0;
        consider(std::move(u0), json{{"delta", y}}, delta_max);
    }
    for (int t = 0; t < o.random_trials; ++t) {
        auto rng = trial_rng(o.seed, static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> u0(g.vertex_count(), 0.0);
        for (VertexId y : b)
            u0[y] = unit(rng);
        consider(std::move(u0), json{{"random", t}}, random_max);
    }
    // Linearity: doubling the data leaves the constant unchanged.
    double scaling_error = 0.0;
    if (!worst_data.empty()) {
        for (double &u : worst_data)
            u *= 2.0;
        auto [lhs, sum] = admissible(worst_data);
        scaling_error = std::abs(lhs * e * v / sum - r.sup_statistic) / r.sup_statistic;
    }
    r.fitted_C = r.sup_statistic;
    r.extra = {{"E", e},          {"n", n},
               {"i_from", i_lo},  {"V", v},
               {"delta_max", delta_max}, {"random_max", random_max},
               {"excluded_zero_trials", excluded}, {"scaling_relative_error", scaling_error}};
    r.pass = std::isfinite(r.sup_statistic) && r.sup_statistic > 0;
    return r;
}

EstimateReport check_MV(const WeightedGraph &g, VertexId x, int R, const MvOptions &o) {
    if (R < 1)
        throw Error(ErrorKind::BadParameter, "MV needs R >= 1");
    require_horizon(g, x, R, "check_MV");
    auto r = blank(g, "MV");
    r.config = {{"x", x}, {"R", R}, {"random_trials", o.random_trials}, {"seed", o.seed}};
    const VertexSet b = ball(g, x, R);
    const VertexSet edge = boundary(g, b);
    if (edge.empty())
        throw Error(ErrorKind::HorizonExceeded, "B(x,R) has no boundary in this graph");
    const double v = b.measure(g);
    DirichletLaplacian lap(g, b);
    const std::size_t x_local = *lap.local(x);

    // Harmonic measure of each boundary vertex: L_B h = (mu_{y b})_{y in B}.
    std::vector<Eigen::VectorXd> harmonic;
    for (VertexId z : edge) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lap.size()));
        for (const auto &nb : g.neighbours(z))
            if (auto i = lap.local(nb.vertex))
                rhs[static_cast<Eigen::Index>(*i)] += nb.weight;
        harmonic.push_back(lap.solve(rhs));
    }
    const Eigen::VectorXd mu = lap.measure_vector();
    auto constant = [&](const Eigen::VectorXd &u) { return u[static_cast<Eigen::Index>(x_local)] * v / u.dot(mu); };

    double delta_max = 0.0;
    for (std::size_t k = 0; k < harmonic.size(); ++k) {
        const double c = constant(harmonic[k]);
        r.grid.push_back({{"boundary_vertex", edge.members()[k]}, {"C", c}});
        if (c > delta_max) {
            delta_max = c;
            r.witness = {{"boundary_vertex", edge.members()[k]}, {"C", c}};
        }
    }
    double random_max = 0.0;
    for (int t = 0; t < o.random_trials; ++t) {
        auto rng = trial_rng(o.seed, static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lap.size()));
        for (const auto &h : harmonic)
            u += unit(rng) * h;
        random_max = std::max(random_max, constant(u));
    }
    r.sup_statistic = delta_max;
    r.fitted_C = delta_max;
    r.extra = {{"V", v}, {"boundary_size", edge.size()}, {"delta_max", delta_max}, {"random_max", random_max}};
    r.pass = std::isfinite(delta_max) && random_max <= delta_max * (1 + 1e-9);
    return r;
}

EstimateReport check_TC(const WeightedGraph &g, const std::vector<VertexId> &centers, const std::vector<int> &radii,
                        const TcOptions &o) {
    auto r = blank(g, "TC");
    r.config = {{"centers", centers}, {"radii", radii}, {"max_points", o.max_points}};
    json per_radius = json::array();
    double sup = 0.0, sup_weak = 0.0;
    for (int R : radii) {
        double tc = 0.0, wtc = 0.0;
        for (VertexId x : centers) {
            require_horizon(g, x, 3 * R - 1, "check_TC");
            const VertexSet around = ball(g, x, R);
            std::vector<VertexId> ys(around.begin(), around.end());
            ys.erase(std::remove(ys.begin(), ys.end(), x), ys.end());
            if (o.max_points > 0 && static_cast<int>(ys.size()) > o.max_points - 1) {
                // Evenly spaced in distance order, ending at the farthest vertex: the large
                // ratios sit near the edge of the ball.
                auto dist = g.distances_from(x);
                std::stable_sort(ys.begin(), ys.end(), [&](VertexId a, VertexId b) { return (*dist)[a] < (*dist)[b]; });
                const std::size_t keep = static_cast<std::size_t>(std::max(o.max_points - 1, 1));
                std::vector<VertexId> picked;
                for (std::size_t i = 1; i <= keep; ++i)
                    picked.push_back(ys[i * ys.size() / keep - 1]);
                ys = std::move(picked);
            }
            ys.insert(ys.begin(), x);
            const double exr = mean_exit_time(g, ball(g, x, R), x);
            for (VertexId y : ys) {
                const double ey2r = mean_exit_time(g, ball(g, y, 2 * R), y);
                const double eyr = mean_exit_time(g, ball(g, y, R), y);
                const double ratio = ey2r / exr;
                const double weak = exr / eyr;
                r.grid.push_back({{"x", x}, {"y", y}, {"R", R}, {"E_y_2R", ey2r}, {"E_x_R", exr}, {"E_y_R", eyr},
                                  {"ratio", ratio}, {"weak_ratio", weak}});
                tc = std::max(tc, ratio);
                wtc = std::max(wtc, weak);
                if (ratio >= sup) {
                    sup = ratio;
                    r.witness = {{"x", x}, {"y", y}, {"R", R}, {"ratio", ratio}};
                }
            }
        }
        sup_weak = std::max(sup_weak, wtc);
        per_radius.push_back({{"R", R}, {"tc", tc}, {"wtc", wtc}});
    }
    r.sup_statistic = sup;
    r.fitted_C = sup;
    r.extra = {{"weak_sup", sup_weak}, {"per_radius", per_radius}};
    r.pass = std::isfinite(sup);
    return r;
}

EstimateReport check_lvv(const WeightedGraph &g, const std::vector<std::pair<VertexId, VertexId>> &pairs,
                         const LvvOptions &o) {
    if (o.n_grid.empty() || o.eps_grid.empty())
        throw Error(ErrorKind::BadParameter, "lvv needs time and epsilon grids");
    auto r = blank(g, "lvv");
    json pairs_json = json::array();
    for (auto [x, y] : pairs)
        pairs_json.push_back({x, y});
    r.config = {{"pairs", pairs_json}, {"n_grid", o.n_grid}, {"eps_grid", o.eps_grid},
                {"exponent_constant", o.exponent_constant}, {"q", o.q}};
    const long n_max = *std::max_element(o.n_grid.begin(), o.n_grid.end());
    std::vector<double> c_eps(o.eps_grid.size(), 0.0);
    for (auto [x, y] : pairs) {
        const int d = g.distance(x, y);
        const ExitProfile px = profile_covering(g, x, static_cast<double>(n_max), d, o.q);
        const ExitProfile py = exit_profile_until(g, y, static_cast<double>(n_max), o.q);
        const double beta = o.beta.value_or(px.fit.beta);
        r.beta_used = beta;
        const Volumes vx(g, x), vy(g, y);
        for (long n : o.n_grid) {
            const double lhs = std::sqrt(vx(inverse_exit(px, static_cast<double>(n))) /
                                         vy(inverse_exit(py, static_cast<double>(n))));
            const double t = exponent_term(px.at(d), static_cast<double>(n), beta);
            r.grid.push_back({{"x", x}, {"y", y}, {"n", n}, {"d", d}, {"lhs", lhs}, {"t", t}});
            for (std::size_t k = 0; k < o.eps_grid.size(); ++k)
                c_eps[k] = std::max(c_eps[k], lhs * std::exp(-o.eps_grid[k] * o.exponent_constant * t));
        }
    }
    json curve = json::array();
    for (std::size_t k = 0; k < o.eps_grid.size(); ++k)
        curve.push_back({{"eps", o.eps_grid[k]}, {"C_eps", c_eps[k]}});
    r.sup_statistic = *std::max_element(c_eps.begin(), c_eps.end());
    r.fitted_C = r.sup_statistic;
    r.extra = {{"curve", curve}};
    r.pass = std::all_of(c_eps.begin(), c_eps.end(), [](double c) { return std::isfinite(c); });
    return r;
}

EstimateReport check_two_step(const WeightedGraph &g, const TwoStepOptions &o) {
    auto r = blank(g, "twostep");
    r.config = {{"radii", o.radii}, {"points", o.points}, {"sets", o.sets}, {"max_set_size", o.max_set_size},
                {"seed", o.seed}};
    const TwoStepGraph ts = two_step_graph(g);
    const WeightedGraph &gs = ts.graph;

    double measure_error = 0.0;
    bool measure_exact = true;
    for (VertexId v = 0; v < gs.vertex_count(); ++v) {
        const double a = gs.measure(v), b = g.measure(ts.original_id[v]);
        measure_error = std::max(measure_error, std::abs(a - b) / b);
        measure_exact = measure_exact && a == b;
    }

    auto to_original = [&](const VertexSet &s) {
        std::vector<VertexId> out;
        for (VertexId v : s)
            out.push_back(ts.original_id[v]);
        std::sort(out.begin(), out.end());
        return VertexSet(std::move(out));
    };
    auto to_local = [&](const VertexSet &s) {
        std::vector<VertexId> out;
        for (VertexId v : s)
            if (auto l = ts.to_local(v))
                out.push_back(*l);
        std::sort(out.begin(), out.end());
        return VertexSet(std::move(out));
    };

    std::mt19937_64 rng(o.seed);
    std::vector<VertexId> points{*ts.to_local(g.root_or_zero())};
    {
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(gs.vertex_count() - 1));
        for (int i = 1; i < o.points; ++i)
            points.push_back(pick(rng));
    }

    int inclusion_violations = 0, inclusion_checks = 0, skipped = 0;
    double e_ratio_min = std::numeric_limits<double>::infinity(), e_ratio_max = 0.0;
    double v_ratio_min = std::numeric_limits<double>::infinity(), v_ratio_max = 0.0;
    for (VertexId xs : points) {
        const VertexId x = ts.original_id[xs];
        for (int R : o.radii) {
            if (g.horizon(x) < 2 * R + 1 || gs.horizon(xs) < R + 1) {
                ++skipped;
                continue;
            }
            const VertexSet b2 = ball(g, x, 2 * R);
            const VertexSet bs = ball(gs, xs, R);
            const VertexSet bs_closure = closure(gs, bs);
            ++inclusion_checks;
            inclusion_violations += !to_local(b2).is_subset_of(bs_closure);
            inclusion_violations += !to_original(bs).is_subset_of(b2);

            const VertexSet b1 = ball(g, x, R);
            if (b1.size() >= g.vertex_count() || bs.size() >= gs.vertex_count()) {
                ++skipped;
                continue;
            }
            const double e = mean_exit_time(g, b1, x);
            const double es = mean_exit_time(gs, bs, xs);
            const double er = e / es;
            const double vr = bs.measure(gs) / b2.measure(g);
            e_ratio_min = std::min(e_ratio_min, er);
            e_ratio_max = std::max(e_ratio_max, er);
            v_ratio_min = std::min(v_ratio_min, vr);
            v_ratio_max = std::max(v_ratio_max, vr);
            r.grid.push_back({{"x", x}, {"R", R}, {"E", e}, {"E_star", es}, {"E_ratio", er}, {"V_ratio", vr}});
        }
    }

    int lambda_violations = 0, lambda_checks = 0;
    double worst_gap = std::numeric_limits<double>::infinity();
    const VertexSet all_star = VertexSet::whole(gs);
    for (int i = 0; i < o.sets; ++i) {
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(gs.vertex_count() - 1));
        std::uniform_int_distribution<int> size(1, o.max_set_size);
        const VertexId start = pick(rng);
        const VertexSet a = random_connected_set(gs, start, all_star, static_cast<std::size_t>(size(rng)), rng);
        const VertexSet a_bar = closure(g, to_original(a));
        if (a.size() >= gs.vertex_count() || a_bar.size() >= g.vertex_count())
            continue;
        const double ls = lambda_min(gs, a).value;
        const double l = lambda_min(g, a_bar).value;
        ++lambda_checks;
        lambda_violations += ls < l - 1e-9;
        if (ls - l < worst_gap) {
            worst_gap = ls - l;
            r.witness = {{"A_star", a.members()}, {"lambda_star", ls}, {"lambda_closure", l}};
        }
    }

    r.sup_statistic = std::max(e_ratio_max, 1.0 / e_ratio_min);
    r.fitted_C = r.sup_statistic;
    r.fitted_c = ts.min_return_density();
    r.extra = {{"bipartite", ts.bipartite},
               {"vertices", gs.vertex_count()},
               {"measure_max_relative_error", measure_error},
               {"measure_bitwise_equal", measure_exact},
               {"inclusion_checks", inclusion_checks},
               {"inclusion_violations", inclusion_violations},
               {"skipped_scales", skipped},
               {"E_ratio_min", number(e_ratio_min)},
               {"E_ratio_max", e_ratio_max},
               {"V_ratio_min", number(v_ratio_min)},
               {"V_ratio_max", v_ratio_max},
               {"lambda_checks", lambda_checks},
               {"lambda_violations", lambda_violations},
               {"lambda_min_gap", number(worst_gap)},
               {"min_q", ts.min_return_density()},
               {"min_return_probability", ts.min_return_probability()}};
    r.pass = inclusion_violations == 0 && lambda_violations == 0 && measure_error <= 1e-12 &&
             ts.min_return_density() > 0 && e_ratio_min >= 0.1 && e_ratio_max <= 10.0;
    return r;
}

} // namespace heatlab
