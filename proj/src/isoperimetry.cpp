#include "heatlab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "heatlab/error.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/spectral.hpp"

namespace heatlab {

using nlohmann::json;

std::vector<double> delta_grid(double first, double last, double step) {
    if (!(step > 0) || last < first)
        throw Error(ErrorKind::BadParameter, "delta grid needs first <= last and step > 0");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double d = first + i * step;
        if (d > last + 1e-9 * std::max(1.0, std::abs(last)))
            break;
        // Snap to the decimal the user typed, so 0.1 + 2*0.1 prints as 0.3.
        grid.push_back(std::round(d * 1e9) / 1e9);
    }
    return grid;
}

std::vector<double> default_delta_grid() { return delta_grid(0.1, 1.5, 0.1); }

namespace {

// One candidate (D inside) A with its left-hand side.
struct Item {
    std::size_t member = 0;
    std::optional<VertexSet> d;
    double lhs = 0.0;
    double mu_a = 0.0;
    double mu_d = 0.0;
};

using Denominator = std::function<double(const Item &, double delta)>;

void fill_report(InequalityReport &report, const SubsetFamily &family, const std::vector<Item> &items,
                 const Denominator &denominator) {
    report.worst_constant.assign(report.delta_grid.size(), 0.0);
    report.witness.assign(report.delta_grid.size(), IsoWitness{});
    for (std::size_t k = 0; k < report.delta_grid.size(); ++k) {
        const double delta = report.delta_grid[k];
        double best = -1.0;
        const Item *arg = nullptr;
        for (const Item &it : items) {
            const double ratio = it.lhs / denominator(it, delta);
            if (ratio > best) {
                best = ratio;
                arg = &it;
            }
        }
        if (!arg)
            continue;
        report.worst_constant[k] = best;
        report.witness[k] = {family.members[arg->member], arg->d, family.center, family.radius, best};
    }
    report.pass = !items.empty() && std::all_of(report.worst_constant.begin(), report.worst_constant.end(),
                                                [](double c) { return std::isfinite(c) && c > 0; });
}

struct Normaliser {
    VertexSet big;
    double mu_big = 0.0;
    std::vector<std::size_t> inside; // family members contained in big
};

Normaliser normaliser(const WeightedGraph &g, const SubsetFamily &family, int factor) {
    require_horizon(g, family.center, factor * family.radius, "isoperimetric check");
    Normaliser n;
    n.big = ball(g, family.center, factor * family.radius);
    n.mu_big = n.big.measure(g);
    for (std::size_t i = 0; i < family.size(); ++i)
        if (family.members[i].is_subset_of(n.big))
            n.inside.push_back(i);
    return n;
}

InequalityReport blank_report(const WeightedGraph &g, const std::string &name, const SubsetFamily &family,
                              const IsoOptions &options, const Normaliser &n, int factor) {
    InequalityReport r;
    r.check_name = name;
    r.graph_id = g.id();
    r.delta_grid = options.delta_grid;
    r.sets_checked = n.inside.size();
    std::size_t exhaustive = 0;
    for (std::size_t i : n.inside)
        exhaustive += family.provenance[i] == Provenance::Exhaustive;
    r.metadata = {{"center", family.center},
                  {"radius", family.radius},
                  {"ball_factor", factor},
                  {"seed", family.seed},
                  {"family_size", family.size()},
                  {"sets_inside_ball", n.inside.size()},
                  {"exhaustive_sets", exhaustive},
                  {"mu_ball", n.mu_big}};
    return r;
}

void require_profile(const SubsetFamily &family, const ExitProfile &profile) {
    if (profile.center != family.center)
        throw Error(ErrorKind::BadParameter, "profile and family have different centres");
    if (profile.rmax() < family.radius)
        throw Error(ErrorKind::BeyondProfile, "profile does not reach the family radius");
}

template <class Value>
std::vector<Item> per_member(const SubsetFamily &family, const std::vector<std::size_t> &inside,
                             const WeightedGraph &g, Value value) {
    std::vector<Item> items(inside.size());
    parallel_for(inside.size(), [&](std::size_t k) {
        const VertexSet &a = family.members[inside[k]];
        items[k] = {inside[k], std::nullopt, value(a), a.measure(g), 0.0};
    });
    return items;
}

double extreme_exit(const WeightedGraph &g, const VertexSet &a) { return extreme_exit_time(g, a).first; }
double inverse_lambda(const WeightedGraph &g, const VertexSet &a) { return 1.0 / lambda_min(g, a).value; }

// max over D inside A of rho(D, A^c) mu(D), with the maximising D.
std::pair<double, VertexSet> best_inner_resistance(const WeightedGraph &g, const VertexSet &a,
                                                   std::size_t inner_exhaustive) {
    const VertexSet outside = complement(g, a);
    std::pair<double, VertexSet> best{-1.0, {}};
    for (const VertexSet &d : inner_sets(g, a, inner_exhaustive)) {
        const double v = effective_resistance(g, d, outside) * d.measure(g);
        if (v > best.first)
            best = {v, d};
    }
    return best;
}

InequalityReport relative_check(const WeightedGraph &g, const std::string &name, const SubsetFamily &family,
                                const ExitProfile &profile, const IsoOptions &options,
                                const std::function<double(const VertexSet &)> &value) {
    require_profile(family, profile);
    const Normaliser n = normaliser(g, family, options.ball_factor);
    InequalityReport r = blank_report(g, name, family, options, n, options.ball_factor);
    const double e = profile.at(family.radius);
    r.metadata["exit_time"] = e;
    r.metadata["q"] = profile.q;
    r.metadata["beta"] = profile.fit.beta;
    auto items = per_member(family, n.inside, g, value);
    fill_report(r, family, items,
                [&](const Item &it, double delta) { return e * std::pow(it.mu_a / n.mu_big, delta); });
    return r;
}

} // namespace

std::vector<VertexSet> inner_sets(const WeightedGraph &g, const VertexSet &a, std::size_t inner_exhaustive) {
    std::vector<VertexSet> out;
    const auto &m = a.members();
    if (m.size() <= inner_exhaustive && m.size() < 63) {
        const std::uint64_t total = std::uint64_t{1} << m.size();
        for (std::uint64_t bits = 1; bits < total; ++bits) {
            std::vector<VertexId> d;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (bits >> i & 1u)
                    d.push_back(m[i]);
            out.emplace_back(std::move(d));
        }
        return out;
    }
    for (VertexId y : m)
        out.push_back(VertexSet::singleton(y));
    for (VertexId y : m)
        for (int r = 2;; ++r) {
            VertexSet b = ball(g, y, r);
            if (!b.is_subset_of(a))
                break;
            out.push_back(std::move(b));
        }
    out.push_back(a);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

InequalityReport check_E(const WeightedGraph &g, const SubsetFamily &family, const ExitProfile &profile,
                         const IsoOptions &options) {
    return relative_check(g, "E", family, profile, options, [&](const VertexSet &a) { return extreme_exit(g, a); });
}

InequalityReport check_FK(const WeightedGraph &g, const SubsetFamily &family, const ExitProfile &profile,
                          const IsoOptions &options) {
    auto r = relative_check(g, "FK", family, profile, options,
                            [&](const VertexSet &a) { return inverse_lambda(g, a); });
    const double e = profile.at(family.radius);
    const double mu_big = r.metadata["mu_ball"].get<double>();
    json nash = json::array();
    for (std::size_t k = 0; k < r.delta_grid.size(); ++k) {
        const double delta = r.delta_grid[k];
        nash.push_back({{"delta", delta}, {"a", e / std::pow(mu_big, delta)}, {"C", r.worst_constant[k]}});
    }
    r.metadata["nash_parameters"] = nash;
    return r;
}

InequalityReport check_rho(const WeightedGraph &g, const SubsetFamily &family, const ExitProfile &profile,
                           const IsoOptions &options) {
    require_profile(family, profile);
    const Normaliser n = normaliser(g, family, options.ball_factor);
    InequalityReport r = blank_report(g, "rho", family, options, n, options.ball_factor);
    const double e = profile.at(family.radius);
    r.metadata["exit_time"] = e;
    r.metadata["q"] = profile.q;
    r.metadata["beta"] = profile.fit.beta;
    r.metadata["inner_exhaustive"] = options.inner_exhaustive;

    std::vector<Item> items(n.inside.size());
    parallel_for(n.inside.size(), [&](std::size_t k) {
        const VertexSet &a = family.members[n.inside[k]];
        auto [value, d] = best_inner_resistance(g, a, options.inner_exhaustive);
        items[k] = {n.inside[k], d, value, a.measure(g), d.measure(g)};
    });
    fill_report(r, family, items,
                [&](const Item &it, double delta) { return e * std::pow(it.mu_a / n.mu_big, delta); });
    return r;
}

PcycleReport check_pcycle(const WeightedGraph &g, std::span<const VertexSet> sets, double delta,
                          std::size_t inner_exhaustive) {
    PcycleReport r;
    r.delta = delta;
    r.sets_checked = sets.size();
    struct Row {
        double e, inv_lambda, rho, mu;
    };
    std::vector<Row> rows(sets.size());
    parallel_for(sets.size(), [&](std::size_t i) {
        rows[i] = {extreme_exit(g, sets[i]), inverse_lambda(g, sets[i]),
                   best_inner_resistance(g, sets[i], inner_exhaustive).first, sets[i].measure(g)};
    });
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const double scale = std::pow(rows[i].mu, delta);
        if (rows[i].e / scale > r.c1) {
            r.c1 = rows[i].e / scale;
            r.witness1 = sets[i];
        }
        if (rows[i].inv_lambda / scale > r.c2) {
            r.c2 = rows[i].inv_lambda / scale;
            r.witness2 = sets[i];
        }
        if (rows[i].rho / scale > r.c3) {
            r.c3 = rows[i].rho / scale;
            r.witness3 = sets[i];
        }
    }
    r.ratio12 = r.c1 / r.c2;
    r.ratio13 = r.c1 / r.c3;
    r.ratio23 = r.c2 / r.c3;
    return r;
}

CorollaryReport check_corollary_forms(const WeightedGraph &g, const SubsetFamily &family, const IsoOptions &options) {
    const int factor = 2;
    const Normaliser n = normaliser(g, family, factor);
    const VertexId x = family.center;
    const int R = family.radius;

    const double e_big = extreme_exit(g, n.big);
    const double inv_lambda_big = inverse_lambda(g, n.big);
    const double rho_annulus = annulus_resistance(g, x, R, 2 * R);

    CorollaryReport out;
    out.fke = blank_report(g, "FKE", family, options, n, factor);
    out.fkll = blank_report(g, "fkll", family, options, n, factor);
    out.fkrr = blank_report(g, "FKrr", family, options, n, factor);
    out.fke.metadata["normaliser"] = e_big;
    out.fkll.metadata["normaliser"] = inv_lambda_big;
    out.fkrr.metadata["normaliser"] = rho_annulus;

    auto volume_ratio = [&](const Item &it, double delta) { return std::pow(it.mu_a / n.mu_big, delta); };
    auto fke = per_member(family, n.inside, g, [&](const VertexSet &a) { return extreme_exit(g, a) / e_big; });
    fill_report(out.fke, family, fke, volume_ratio);
    auto fkll = per_member(family, n.inside, g,
                           [&](const VertexSet &a) { return inverse_lambda(g, a) / inv_lambda_big; });
    fill_report(out.fkll, family, fkll, volume_ratio);

    // The two-exponent form depends on D, so every (D, A) pair is kept.
    std::vector<std::vector<Item>> per(n.inside.size());
    parallel_for(n.inside.size(), [&](std::size_t k) {
        const VertexSet &a = family.members[n.inside[k]];
        const VertexSet outside = complement(g, a);
        const double mu_a = a.measure(g);
        for (VertexSet &d : inner_sets(g, a, options.inner_exhaustive)) {
            const double rho = effective_resistance(g, d, outside);
            const double mu_d = d.measure(g);
            per[k].push_back({n.inside[k], std::move(d), rho / rho_annulus, mu_a, mu_d});
        }
    });
    std::vector<Item> fkrr;
    for (auto &v : per)
        for (auto &it : v)
            fkrr.push_back(std::move(it));
    fill_report(out.fkrr, family, fkrr, [&](const Item &it, double delta) {
        return std::pow(it.mu_a / it.mu_d, delta) * std::pow(it.mu_d / n.mu_big, delta - 1.0);
    });
    return out;
}

ScaleStability scale_stability(std::span<const double> constants, double factor) {
    ScaleStability s;
    if (constants.empty())
        return s;
    s.min = *std::min_element(constants.begin(), constants.end());
    s.max = *std::max_element(constants.begin(), constants.end());
    s.ratio = s.max / s.min;
    s.stable = std::isfinite(s.ratio) && s.min > 0 && s.ratio <= factor;
    return s;
}

namespace {

json set_json(const VertexSet &s) { return s.members(); }

} // namespace

json to_json(const InequalityReport &r) {
    json witnesses = json::array();
    for (const auto &w : r.witness) {
        json j = {{"A", set_json(w.a)}, {"x", w.x}, {"R", w.radius}, {"ratio", w.ratio}};
        if (w.d)
            j["D"] = set_json(*w.d);
        witnesses.push_back(std::move(j));
    }
    return {{"check", r.check_name},       {"graph", r.graph_id},      {"delta_grid", r.delta_grid},
            {"worst_constant", r.worst_constant}, {"witnesses", witnesses}, {"pass", r.pass},
            {"sets_checked", r.sets_checked}, {"metadata", r.metadata}};
}

json to_json(const PcycleReport &r) {
    return {{"check", "pcycle"},
            {"delta", r.delta},
            {"C1", r.c1},
            {"C2", r.c2},
            {"C3", r.c3},
            {"witness1", set_json(r.witness1)},
            {"witness2", set_json(r.witness2)},
            {"witness3", set_json(r.witness3)},
            {"ratio12", r.ratio12},
            {"ratio13", r.ratio13},
            {"ratio23", r.ratio23},
            {"sets_checked", r.sets_checked}};
}

} // namespace heatlab
