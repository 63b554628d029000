#include "heatlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "heatlab/error.hpp"

#ifndef HEATLAB_VERSION
#define HEATLAB_VERSION "0.0.0"
#endif

namespace heatlab {

std::string version_string() { return std::string("heatlab ") + HEATLAB_VERSION; }

nlohmann::json profile_to_json(const ExitProfile &p) {
    nlohmann::json slopes = nlohmann::json::array();
    for (auto [r, s] : p.fit.local_slopes)
        slopes.push_back({r, s});
    auto num = [](double v) -> nlohmann::json { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    return {{"center", p.center}, {"E", p.table},           {"beta", num(p.fit.beta)},
            {"beta_prime", num(p.fit.beta_prime)},          {"q", p.q},
            {"local_slopes", slopes}, {"fit_residual", num(p.fit.residual)}};
}

SummaryRow summarize(const EstimateReport &r) {
    return {r.check_name, r.sup_statistic, r.fitted_C, r.fitted_c, r.pass, {}};
}

SummaryRow summarize(const InequalityReport &r) {
    SummaryRow row{r.check_name, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN(), r.pass, {}};
    if (!r.worst_constant.empty()) {
        row.statistic = *std::max_element(r.worst_constant.begin(), r.worst_constant.end());
        row.fitted_C = r.worst_constant.front();
    }
    return row;
}

namespace {

std::string format(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string quote(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

void write_summary_csv(const std::vector<SummaryRow> &rows, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::Format, "cannot write " + path.string());
    out << "check,statistic,fitted_C,fitted_c,pass,error\n";
    for (const auto &r : rows)
        out << quote(r.check) << ',' << format(r.statistic) << ',' << format(r.fitted_C) << ','
            << format(r.fitted_c) << ',' << (r.pass ? "true" : "false") << ',' << quote(r.error) << '\n';
}

nlohmann::json stamped(nlohmann::json report) {
    report["version"] = version_string();
    return report;
}

} // namespace heatlab
