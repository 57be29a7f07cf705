// Eigen has to be seen before httplib's system headers
#include "lvequiv/service.hpp"

#include <httplib.h>

#include <memory>

#include "lvequiv/errors.hpp"

namespace lvequiv {

void serve(const std::string& host, int port, const std::function<void(const ServerHandle&)>& ready) {
    httplib::Server server;
    for (const auto& name : endpoints()) {
        server.Post(name, [name](const httplib::Request& req, httplib::Response& res) {
            res.set_content(handle_text(name, req.body), "application/json");
        });
    }
    // envelope form: the endpoint comes from the request's command field
    server.Post("/api", [](const httplib::Request& req, httplib::Response& res) {
        res.set_content(handle_text("", req.body), "application/json");
    });
    // long traversals: {"members_found": n} lines while running, then the envelope line
    server.Post("/equiv/class/stream", [](const httplib::Request& req, httplib::Response& res) {
        auto body = std::make_shared<std::string>(req.body);
        res.set_chunked_content_provider("application/x-ndjson", [body](size_t, httplib::DataSink& sink) {
            auto progress = [&sink](std::size_t found) {
                std::string line = nlohmann::json{{"members_found", found}}.dump() + "\n";
                sink.write(line.data(), line.size());
            };
            std::string last = handle_text("/equiv/class", *body, progress) + "\n";
            sink.write(last.data(), last.size());
            sink.done();
            return true;
        });
    });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"ok\":true}", "application/json");
    });
    int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
    if (ready) ready(ServerHandle{bound, [&server] { server.stop(); }});
    server.listen_after_bind();
}

}  // namespace lvequiv
