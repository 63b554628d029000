#include "heatlab/graph_io.hpp"

#include <cmath>
#include <fstream>

#include "heatlab/error.hpp"

namespace heatlab {

using nlohmann::json;

json exact_number(double value) {
    if (std::isfinite(value) && std::floor(value) == value && std::abs(value) < 9.0e15)
        return static_cast<std::int64_t>(value);
    return value;
}

json graph_to_json(const WeightedGraph &g) {
    json edges = json::array();
    for (const Edge &e : g.edges())
        edges.push_back(json::array({e.u, e.v, exact_number(e.weight)}));

    const GraphMeta &m = g.meta();
    json meta = {{"family", m.family}, {"params", m.params}, {"safe_radius", m.safe_radius}};
    if (!m.frontier.empty())
        meta["frontier"] = m.frontier;
    if (!m.coords.empty())
        meta["coords"] = m.coords;
    if (!m.extra.empty())
        meta["extra"] = m.extra;
    if (g.has_self_loops())
        meta["self_loops"] = true;

    json doc = {{"vertex_count", g.vertex_count()}, {"edges", std::move(edges)}};
    doc["root"] = g.root() ? json(*g.root()) : json(nullptr);
    doc["meta"] = std::move(meta);
    return doc;
}

WeightedGraph graph_from_json(const json &doc) {
    try {
        std::vector<Edge> edges;
        for (const auto &e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw Error(ErrorKind::Format, "edge entries must be [u, v, w]");
            edges.push_back({e[0].get<VertexId>(), e[1].get<VertexId>(), e[2].get<double>()});
        }
        BuildOptions options;
        if (doc.contains("root") && !doc["root"].is_null())
            options.root = doc["root"].get<VertexId>();
        if (doc.contains("meta")) {
            const json &m = doc["meta"];
            options.meta.family = m.value("family", std::string("custom"));
            options.meta.params = m.value("params", json::object());
            options.meta.safe_radius = m.value("safe_radius", -1);
            if (m.contains("frontier"))
                options.meta.frontier = m["frontier"].get<std::vector<VertexId>>();
            if (m.contains("coords"))
                options.meta.coords = m["coords"].get<std::vector<std::vector<int>>>();
            if (m.contains("extra"))
                options.meta.extra = m["extra"];
            options.allow_self_loops = m.value("self_loops", false);
        }
        auto g = build_graph(edges, std::move(options));
        if (doc.contains("vertex_count") && doc["vertex_count"].get<std::size_t>() != g.vertex_count())
            throw Error(ErrorKind::Format, "vertex_count does not match the edge list");
        return g;
    } catch (const json::exception &ex) {
        throw Error(ErrorKind::Format, ex.what());
    }
}

void write_json(const json &doc, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorKind::Format, "cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
}

json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Format, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception &ex) {
        throw Error(ErrorKind::Format, path.string() + ": " + ex.what());
    }
}

void write_graph(const WeightedGraph &g, const std::filesystem::path &path) {
    write_json(graph_to_json(g), path);
}

WeightedGraph read_graph(const std::filesystem::path &path) { return graph_from_json(read_json(path)); }

} // namespace heatlab
