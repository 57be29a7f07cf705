#pragma once

#include <string>

#include <json.hpp>

#include "lvequiv/digraph.hpp"

namespace lvequiv {

// Graph file format: {"vertices": [...], "latent": [...], "edges": [[tail, head], ...]}.
// Serialization lists vertices in index order and edges sorted by (tail, head) index, so
// parse followed by serialize is byte-stable.
std::string serialize_graph(const Digraph& g);
Digraph parse_graph(const std::string& text);
Digraph load_graph(const std::string& path);
void save_graph(const Digraph& g, const std::string& path);

nlohmann::ordered_json graph_to_json(const Digraph& g);
Digraph graph_from_json(const nlohmann::json& j);

// Converts a byte offset in `text` into a 1-based (line, column).
std::pair<int, int> line_column(const std::string& text, size_t offset);

}  // namespace lvequiv
