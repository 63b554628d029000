#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "heatlab/graph.hpp"

namespace heatlab {

/// Graph JSON: {"vertex_count", "edges": [[u, v, w], ...], "root", "meta": {...}}.
/// Integral weights are written as JSON integers, all others with round-trip precision.
nlohmann::json graph_to_json(const WeightedGraph &g);
WeightedGraph graph_from_json(const nlohmann::json &doc);

void write_graph(const WeightedGraph &g, const std::filesystem::path &path);
WeightedGraph read_graph(const std::filesystem::path &path);

/// Writes a JSON document with two-space indentation and a trailing newline.
void write_json(const nlohmann::json &doc, const std::filesystem::path &path);
nlohmann::json read_json(const std::filesystem::path &path);

/// Emits a number as an integer when it is exactly integral.
nlohmann::json exact_number(double value);

} // namespace heatlab
