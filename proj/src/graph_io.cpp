#include "lvequiv/graph_io.hpp"

#include <fstream>
#include <sstream>

namespace lvequiv {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, size_t offset) {
    int line = 1, col = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

nlohmann::ordered_json graph_to_json(const Digraph& g) {
    nlohmann::ordered_json j;
    j["vertices"] = g.labels();
    j["latent"] = g.labels_of(g.latent());
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : g.edges()) edges.push_back({g.label(e.tail), g.label(e.head)});
    j["edges"] = edges;
    return j;
}

std::string serialize_graph(const Digraph& g) {
    auto list = [](const std::vector<std::string>& xs) {
        std::string s = "[";
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += json(xs[i]).dump();
        }
        return s + "]";
    };
    std::string out = "{\n  \"vertices\": " + list(g.labels()) + ",\n";
    out += "  \"latent\": " + list(g.labels_of(g.latent())) + ",\n";
    out += "  \"edges\": [";
    auto edges = g.edges();
    for (size_t i = 0; i < edges.size(); ++i) {
        if (i) out += ", ";
        out += list({g.label(edges[i].tail), g.label(edges[i].head)});
    }
    out += "]\n}\n";
    return out;
}

namespace {
std::vector<std::string> string_list(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'", 0, 0);
    const json& a = j.at(key);
    if (!a.is_array()) throw ParseError(std::string("field '") + key + "' must be an array", 0, 0);
    std::vector<std::string> out;
    for (const auto& x : a) {
        if (!x.is_string()) throw ParseError(std::string("field '") + key + "' must hold strings", 0, 0);
        out.push_back(x.get<std::string>());
    }
    return out;
}
}  // namespace

Digraph graph_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("graph must be a JSON object", 0, 0);
    auto vertices = string_list(j, "vertices");
    std::vector<std::string> latent;
    if (j.contains("latent")) latent = string_list(j, "latent");
    std::vector<std::pair<std::string, std::string>> edges;
    if (j.contains("edges")) {
        const json& a = j.at("edges");
        if (!a.is_array()) throw ParseError("field 'edges' must be an array", 0, 0);
        for (const auto& e : a) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                throw ParseError("each edge must be a [tail, head] pair of labels", 0, 0);
            edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
        }
    }
    return Digraph(vertices, latent, edges);
}

Digraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw ParseError(pos == std::string::npos ? msg : msg.substr(pos), line, col);
    }
    return graph_from_json(j);
}

Digraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

void save_graph(const Digraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << serialize_graph(g);
}

}  // namespace lvequiv
