#pragma once

#include <functional>
#include <string>

#include <json.hpp>

#include "lvequiv/equivalence.hpp"
#include "lvequiv/glvling.hpp"

namespace lvequiv {

// Envelope in: {"command"?, "graph"?, "graph_b"?, "matrix"? (CSV text), "matrix_ref"? (CSV path),
// "params"?, "revision"?}. Envelope out: {"ok", "payload", "diagnostics", "error"?, "revision"?}.
// Responses depend only on the request. Long traversals report the members found so far
// through `progress` when given.
using Progress = std::function<void(std::size_t)>;
// An empty endpoint takes it from request["command"] ("/reduce" or "reduce").
nlohmann::ordered_json handle(const std::string& endpoint, const nlohmann::json& request, const Progress& progress = {});
// Same, from and to text; malformed JSON comes back as an error envelope.
std::string handle_text(const std::string& endpoint, const std::string& body, const Progress& progress = {});

const std::vector<std::string>& endpoints();

// Class serialization: {"complete", "seed_index", "total", "offset", "members": [graph...],
// "transitions": [[from, to, kind], ...]}. Members are a page [offset, offset + limit) of the
// key-sorted member list; transitions always cover the whole class.
nlohmann::ordered_json class_to_json(const EquivalenceClass& c, std::size_t offset = 0,
                                     std::size_t limit = static_cast<std::size_t>(-1));
nlohmann::ordered_json presentation_to_json(const Presentation& p);
nlohmann::ordered_json recovery_to_json(const RecoveryResult& r, std::size_t limit = 24);

struct ServerHandle {
    int port = 0;
    std::function<void()> stop;
};

// Blocks serving POST endpoints until stopped. Port 0 picks a free port. `ready` runs once the
// socket is bound; the handle it receives may be used from any thread.
void serve(const std::string& host, int port, const std::function<void(const ServerHandle&)>& ready = {});

}  // namespace lvequiv
