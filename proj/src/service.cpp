#include "lvequiv/service.hpp"

#include <algorithm>

#include "lvequiv/errors.hpp"
#include "lvequiv/graph_io.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/ranks.hpp"

namespace lvequiv {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace {

ojson edge_pairs(const Digraph& g, const std::vector<Edge>& edges) {
    ojson out = ojson::array();
    for (const auto& e : edges) out.push_back({g.label(e.tail), g.label(e.head)});
    return out;
}

const json& params_of(const json& req) {
    static const json empty = json::object();
    auto it = req.find("params");
    if (it == req.end() || it->is_null()) return empty;
    if (!it->is_object()) throw PreconditionError("\"params\" must be an object");
    return *it;
}

Digraph graph_field(const json& req, const char* key) {
    auto it = req.find(key);
    if (it == req.end() || it->is_null()) throw PreconditionError(std::string("request needs \"") + key + "\"");
    return graph_from_json(*it);
}

VertexSet label_set(const Digraph& g, const json& params, const char* key) {
    auto it = params.find(key);
    if (it == params.end()) throw PreconditionError(std::string("params need \"") + key + "\"");
    if (!it->is_array()) throw PreconditionError(std::string("\"") + key + "\" must be a list of labels");
    VertexSet s = 0;
    for (const auto& v : *it) {
        if (!v.is_string()) throw PreconditionError(std::string("\"") + key + "\" must be a list of labels");
        s |= bit(g.index_of(v.get<std::string>()));
    }
    return s;
}

template <class T>
T param(const json& params, const char* key, T fallback) {
    auto it = params.find(key);
    if (it == params.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw PreconditionError(std::string("parameter \"") + key + "\" has the wrong type");
    }
}

TraversalBudget budget_of(const json& params) {
    TraversalBudget b;
    b.max_members = param<long long>(params, "budget_members", b.max_members);
    b.max_seconds = param<double>(params, "budget_seconds", b.max_seconds);
    if (b.max_members < 1 || !(b.max_seconds > 0)) throw PreconditionError("budgets must be positive");
    return b;
}

ojson do_reduce(const json& req, ojson&, const Progress&) {
    auto rep = reduce(graph_field(req, "graph"));
    ojson p;
    p["graph"] = graph_to_json(rep.reduced);
    p["removed_vertices"] = rep.removed_vertices;
    ojson added = ojson::array();
    for (const auto& [a, b] : rep.added_edges) added.push_back({a, b});
    p["added_edges"] = added;
    p["redundant_sets"] = rep.mrl;
    return p;
}

ojson do_irreducible(const json& req, ojson&, const Progress&) {
    Digraph g = graph_field(req, "graph");
    ojson p;
    p["irreducible"] = is_irreducible(g);
    return p;
}

ojson do_rank(const json& req, ojson&, const Progress&) {
    Digraph g = graph_field(req, "graph");
    const json& params = params_of(req);
    std::string kind = param<std::string>(params, "kind", "path");
    RankQuery q{label_set(g, params, "z"), label_set(g, params, "y")};
    ojson p;
    p["kind"] = kind;
    if (kind == "path") {
        p["rank"] = path_rank(g, q);
    } else if (kind == "edge") {
        p["rank"] = edge_rank(g, q);
    } else if (kind == "duality") {
        p["gap"] = duality_gap(g, q);
    } else {
        throw PreconditionError("rank kind must be path, edge or duality");
    }
    return p;
}

ojson do_check(const json& req, ojson&, const Progress&) {
    Digraph a = graph_field(req, "graph"), b = graph_field(req, "graph_b");
    auto r = check_equivalent(a, b);
    ojson p;
    p["equivalent"] = r.equivalent;
    ojson map = ojson::object();
    if (r.equivalent)
        for (int v = 0; v < b.size(); ++v) map[b.label(v)] = a.label(r.vertex_map[v]);
    p["vertex_map"] = map;
    return p;
}

ojson do_class(const json& req, ojson& diag, const Progress& progress) {
    Digraph g = graph_field(req, "graph");
    const json& params = params_of(req);
    auto offset = param<long long>(params, "offset", 0);
    auto limit = param<long long>(params, "limit", 24);
    if (offset < 0 || limit < 0) throw PreconditionError("offset and limit must be nonnegative");
    EquivalenceClass c;
    try {
        TraversalBudget budget = budget_of(params);
        budget.on_progress = progress;
        c = traverse_class(g, budget);
    } catch (const BudgetExceeded& e) {
        c = e.partial();
        diag.push_back("traversal budget reached; class is partial");
    }
    return class_to_json(c, static_cast<std::size_t>(offset), static_cast<std::size_t>(limit));
}

ojson do_admissible(const json& req, ojson&, const Progress&) {
    Digraph g = graph_field(req, "graph");
    ojson edits = ojson::array();
    for (const auto& e : edge_admissibility(g)) {
        ojson j;
        j["tail"] = g.label(e.tail);
        j["head"] = g.label(e.head);
        j["kind"] = e.kind == EditKind::add ? "add" : "delete";
        j["admissible"] = e.admissible;
        edits.push_back(j);
    }
    ojson p;
    p["edits"] = edits;
    return p;
}

ojson do_present(const json& req, ojson&, const Progress&) { return presentation_to_json(presentation(graph_field(req, "graph"))); }

ojson do_recover(const json& req, ojson& diag, const Progress& progress) {
    const json& params = params_of(req);
    RecoverOptions opts;
    opts.budget = budget_of(params);
    opts.budget.on_progress = progress;
    std::string mode = param<std::string>(params, "mode", "auto");
    if (mode == "exact") {
        opts.mode = RecoverMode::exact;
    } else if (mode == "noisy") {
        opts.mode = RecoverMode::noisy;
    } else if (mode != "auto") {
        throw PreconditionError("mode must be auto, exact or noisy");
    }
    auto limit = param<long long>(params, "limit", 24);
    RecoveryResult r;
    if (req.contains("graph") && !req["graph"].is_null()) {
        Digraph g = graph_field(req, "graph");
        opts.latent_labels = g.labels_of(g.latent());
        r = recover(GraphRankOracle(g), g.num_latent(), opts);
    } else {
        MixingMatrix a;
        if (req.contains("matrix")) {
            a = parse_mixing_csv(req["matrix"].get<std::string>());
        } else if (req.contains("matrix_ref")) {
            a = load_mixing_csv(req["matrix_ref"].get<std::string>());
        } else {
            throw PreconditionError("recover needs \"graph\" (exact oracle), \"matrix\" or \"matrix_ref\"");
        }
        int latents = param<int>(params, "latents", a.cols() - a.rows());
        ConfidenceParams conf{param<double>(params, "confidence_alpha", 25.0), param<double>(params, "confidence_eps", 0.02)};
        r = recover_from_mixing(a, latents, param<double>(params, "tol", kDefaultRankTolerance), conf, opts);
    }
    for (const auto& d : r.diagnostics) diag.push_back(d);
    return recovery_to_json(r, static_cast<std::size_t>(std::max(0LL, limit)));
}

using Handler = ojson (*)(const json&, ojson&, const Progress&);

const std::vector<std::pair<std::string, Handler>>& table() {
    static const std::vector<std::pair<std::string, Handler>> t{
        {"/reduce", do_reduce},       {"/irreducible", do_irreducible},     {"/rank", do_rank},
        {"/equiv/check", do_check},   {"/equiv/class", do_class},           {"/edge/admissible", do_admissible},
        {"/present", do_present},     {"/recover", do_recover},
    };
    return t;
}

ojson error_envelope(const std::string& kind, const std::string& message, int line = 0, int column = 0) {
    ojson out;
    out["ok"] = false;
    out["payload"] = nullptr;
    out["diagnostics"] = ojson::array();
    ojson err;
    err["kind"] = kind;
    err["message"] = message;
    if (line > 0) {
        err["line"] = line;
        err["column"] = column;
    }
    out["error"] = err;
    return out;
}

}  // namespace

const std::vector<std::string>& endpoints() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, h] : table()) n.push_back(name);
        return n;
    }();
    return names;
}

ojson class_to_json(const EquivalenceClass& c, std::size_t offset, std::size_t limit) {
    ojson out;
    out["complete"] = c.complete;
    out["seed_index"] = c.seed_index;
    out["total"] = c.members.size();
    out["offset"] = offset;
    ojson members = ojson::array();
    for (std::size_t k = offset; k < c.members.size() && k - offset < limit; ++k) members.push_back(graph_to_json(c.members[k]));
    out["members"] = members;
    ojson tr = ojson::array();
    for (const auto& t : c.transitions) tr.push_back({t.from_index, t.to_index, to_string(t.kind)});
    out["transitions"] = tr;
    return out;
}

ojson presentation_to_json(const Presentation& p) {
    ojson out;
    out["base"] = graph_to_json(p.base);
    out["solid"] = edge_pairs(p.base, p.solid_edges);
    out["dashed"] = edge_pairs(p.base, p.dashed_edges);
    return out;
}

ojson recovery_to_json(const RecoveryResult& r, std::size_t limit) {
    ojson out;
    out["seed"] = graph_to_json(r.seed);
    out["noisy"] = r.noisy;
    out["repaired"] = r.repaired;
    out["agreement"] = r.agreement;
    out["latent_bases"] = family_lists(r.latent_bases);
    out["class"] = r.equivalence_class ? class_to_json(*r.equivalence_class, 0, limit) : ojson(nullptr);
    return out;
}

ojson handle(const std::string& endpoint, const json& request, const Progress& progress) {
    ojson out;
    try {
        if (!request.is_object()) throw PreconditionError("request must be a JSON object");
        // an empty endpoint dispatches on the request's own command field
        std::string name = endpoint;
        if (name.empty()) {
            if (!request.contains("command") || !request["command"].is_string()) throw PreconditionError("request has no command");
            name = request["command"].get<std::string>();
            if (!name.empty() && name.front() != '/') name.insert(name.begin(), '/');
        }
        auto it = std::find_if(table().begin(), table().end(), [&](const auto& e) { return e.first == name; });
        if (it == table().end()) throw UnknownEndpoint("no endpoint " + name);
        ojson diag = ojson::array();
        ojson payload = it->second(request, diag, progress);
        out["ok"] = true;
        out["payload"] = std::move(payload);
        out["diagnostics"] = std::move(diag);
    } catch (const ParseError& e) {
        out = error_envelope(e.kind(), e.what(), e.line(), e.column());
    } catch (const Error& e) {
        out = error_envelope(e.kind(), e.what());
    } catch (const json::exception& e) {
        out = error_envelope("precondition", std::string("bad request field: ") + e.what());
    } catch (const std::exception& e) {
        out = error_envelope("internal", e.what());
    }
    if (request.is_object() && request.contains("revision")) out["revision"] = request["revision"];
    return out;
}

std::string handle_text(const std::string& endpoint, const std::string& body, const Progress& progress) {
    json req;
    try {
        req = json::parse(body.empty() ? std::string("{}") : body);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(body, e.byte > 0 ? e.byte - 1 : 0);
        return error_envelope("parse", "request is not valid JSON", line, col).dump();
    }
    return handle(endpoint, req, progress).dump();
}

}  // namespace lvequiv
