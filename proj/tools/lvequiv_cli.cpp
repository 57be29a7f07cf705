// Command-line front end. Exit status: 0 success, 1 domain error, 2 usage error.
#include "lvequiv/service.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lvequiv/enumeration.hpp"
#include "lvequiv/errors.hpp"
#include "lvequiv/graph_io.hpp"
#include "lvequiv/matroid.hpp"
#include "lvequiv/mixing.hpp"

using namespace lvequiv;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string in, out, format = "text";
    long long budget_members = 1000000;
    double budget_seconds = 600;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw Error("cannot write " + c.out);
    f << text;
}

std::vector<std::string> split_labels(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

json graph_request(const std::string& path) {
    json req;
    req["graph"] = json::parse(graph_to_json(load_graph(path)).dump());
    return req;
}

// Runs an endpoint and unwraps the payload, turning error envelopes back into exceptions.
ojson call(const std::string& endpoint, const json& req) {
    ojson resp = handle(endpoint, req);
    for (const auto& d : resp["diagnostics"]) std::cerr << d.get<std::string>() << "\n";
    if (!resp["ok"].get<bool>()) {
        const auto& e = resp["error"];
        throw Error(e["message"].get<std::string>());
    }
    return resp["payload"];
}

std::string edge_text(const ojson& pairs) {
    std::string s;
    for (const auto& p : pairs) s += (s.empty() ? "" : " ") + p[0].get<std::string>() + "->" + p[1].get<std::string>();
    return s;
}

std::string set_text(VertexSet s) {
    std::string out = "{";
    bool first = true;
    for_each_bit(s, [&](int i) {
        out += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
    });
    return out + "}";
}

std::string family_text(const Family& f) {
    std::string out;
    for (VertexSet s : f) out += (out.empty() ? "" : " ") + set_text(s);
    return out;
}

// Rows of 0/1, optionally separated by spaces; '#' starts a comment line.
BinaryMatrix read_matrix(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<VertexSet> rows;
    int width = -1, line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        VertexSet r = 0;
        int w = 0;
        for (size_t k = 0; k < line.size(); ++k) {
            char c = line[k];
            if (c == ' ' || c == '\t' || c == '\r' || c == ',') continue;
            if (c != '0' && c != '1') throw ParseError("matrix entries must be 0 or 1", line_no, static_cast<int>(k) + 1);
            if (c == '1') r |= bit(w);
            ++w;
        }
        if (w == 0) continue;
        if (width >= 0 && w != width) throw ParseError("rows have different lengths", line_no, 1);
        width = w;
        rows.push_back(r);
    }
    if (rows.empty()) throw ParseError("empty matrix", 0, 0);
    return BinaryMatrix::from_rows(width, rows);
}

// One set per line as 1-based indices separated by spaces or commas.
Family read_family(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    std::vector<std::vector<int>> lists;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        for (char& c : line)
            if (c == ',' || c == '{' || c == '}') c = ' ';
        std::istringstream ls(line);
        std::vector<int> s;
        int v;
        while (ls >> v) {
            if (v < 1) throw ParseError("basis elements are 1-based", static_cast<int>(lists.size()) + 1, 0);
            s.push_back(v - 1);
        }
        if (!s.empty() || line.find_first_not_of(" \t\r") != std::string::npos) lists.push_back(s);
    }
    return family_from_lists(lists);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent-variable digraph equivalence toolkit"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub, bool needs_in) {
        auto opt = sub->add_option("--in", c.in, "input graph file");
        if (needs_in) opt->required();
        sub->add_option("--out", c.out, "write output to this file");
        sub->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget-members", c.budget_members, "stop traversal after this many members");
        sub->add_option("--budget-seconds", c.budget_seconds, "stop traversal after this many seconds");
    };
    auto budget_params = [&] { return json{{"budget_members", c.budget_members}, {"budget_seconds", c.budget_seconds}}; };
    auto structured = [&] { return c.format == "structured"; };
    std::function<void()> action;

    auto* reduce_cmd = app.add_subcommand("reduce", "reduce a model to an equivalent irreducible one");
    add_common(reduce_cmd, true);
    reduce_cmd->callback([&] {
        action = [&] {
            auto p = call("/reduce", graph_request(c.in));
            emit(c, structured() ? p.dump(2) + "\n" : serialize_graph(graph_from_json(json::parse(p["graph"].dump()))));
        };
    });

    auto* irr_cmd = app.add_subcommand("irreducible", "test irreducibility");
    add_common(irr_cmd, true);
    irr_cmd->callback([&] {
        action = [&] {
            auto p = call("/irreducible", graph_request(c.in));
            emit(c, structured() ? p.dump(2) + "\n" : std::string(p["irreducible"].get<bool>() ? "true\n" : "false\n"));
        };
    });

    auto* rank_cmd = app.add_subcommand("rank", "path, edge rank or duality gap");
    rank_cmd->require_subcommand(1);
    std::string z, y;
    for (const char* kind : {"path", "edge", "duality"}) {
        auto* sub = rank_cmd->add_subcommand(kind);
        add_common(sub, true);
        sub->add_option("--z", z, "target labels, comma separated")->required();
        sub->add_option("--y", y, "source labels, comma separated")->required();
        std::string k = kind;
        sub->callback([&, k] {
            action = [&, k] {
                json req = graph_request(c.in);
                req["params"] = {{"kind", k}, {"z", split_labels(z)}, {"y", split_labels(y)}};
                auto p = call("/rank", req);
                emit(c, structured() ? p.dump(2) + "\n" : std::to_string(p[k == "duality" ? "gap" : "rank"].get<int>()) + "\n");
            };
        });
    }

    auto* equiv_cmd = app.add_subcommand("equiv", "equivalence queries");
    equiv_cmd->require_subcommand(1);
    std::string other;
    auto* check_cmd = equiv_cmd->add_subcommand("check", "are two models equivalent");
    add_common(check_cmd, true);
    check_cmd->add_option("--other", other, "second graph file")->required();
    check_cmd->callback([&] {
        action = [&] {
            json req = graph_request(c.in);
            req["graph_b"] = graph_request(other)["graph"];
            auto p = call("/equiv/check", req);
            if (structured()) return emit(c, p.dump(2) + "\n");
            std::string s = p["equivalent"].get<bool>() ? "equivalent\n" : "not equivalent\n";
            for (const auto& [k, v] : p["vertex_map"].items()) s += "  " + k + " -> " + v.get<std::string>() + "\n";
            emit(c, s);
        };
    });
    long long offset = 0, limit = -1;
    auto* class_cmd = equiv_cmd->add_subcommand("class", "enumerate the equivalence class");
    add_common(class_cmd, true);
    add_budget(class_cmd);
    class_cmd->add_option("--offset", offset, "first member to print");
    class_cmd->add_option("--limit", limit, "members to print (default all)");
    class_cmd->callback([&] {
        action = [&] {
            json req = graph_request(c.in);
            req["params"] = budget_params();
            req["params"]["offset"] = offset;
            req["params"]["limit"] = limit < 0 ? std::numeric_limits<long long>::max() : limit;
            auto p = call("/equiv/class", req);
            if (structured()) return emit(c, p.dump(2) + "\n");
            std::ostringstream s;
            s << "members " << p["total"].get<long long>() << (p["complete"].get<bool>() ? " complete" : " partial") << "\n";
            long long k = p["offset"].get<long long>();
            for (const auto& m : p["members"]) s << k++ << ": " << edge_text(m["edges"]) << "\n";
            s << "transitions " << p["transitions"].size() << "\n";
            for (const auto& t : p["transitions"]) s << t[0] << " " << t[1] << " " << t[2].get<std::string>() << "\n";
            emit(c, s.str());
        };
    });
    auto* present_cmd = equiv_cmd->add_subcommand("present", "maximal representative with solid and dashed edges");
    add_common(present_cmd, true);
    present_cmd->callback([&] {
        action = [&] {
            auto p = call("/present", graph_request(c.in));
            if (structured()) return emit(c, p.dump(2) + "\n");
            std::string s = serialize_graph(graph_from_json(json::parse(p["base"].dump())));
            s += "solid: " + edge_text(p["solid"]) + "\ndashed: " + edge_text(p["dashed"]) + "\n";
            emit(c, s);
        };
    });

    auto* matroid_cmd = app.add_subcommand("matroid", "transversal matroid tools (1-based indices)");
    matroid_cmd->require_subcommand(1);
    std::string matrix_path, bases_path, columns;
    int ground = 0, column = 0;
    auto* fam_cmd = matroid_cmd->add_subcommand("families", "bases, circuits, cocircuits of a presentation");
    fam_cmd->add_option("--matrix", matrix_path, "0/1 matrix file");
    add_common(fam_cmd, false);
    fam_cmd->add_option("--columns", columns, "with --in: source labels (default the latents)");
    fam_cmd->callback([&] {
        action = [&] {
            RankTable t;
            if (!matrix_path.empty()) {
                t = RankTable::of_presentation(read_matrix(matrix_path));
            } else if (!c.in.empty()) {
                Digraph g = load_graph(c.in);
                VertexSet cols = g.latent();
                if (!columns.empty()) cols = g.set_of(split_labels(columns));
                t = RankTable::of_presentation(g.support_matrix(), cols);
            } else {
                throw UsageError("families needs --matrix or --in");
            }
            auto f = families(t);
            if (structured()) {
                ojson j;
                j["bases"] = family_lists(f.bases);
                j["circuits"] = family_lists(f.circuits);
                j["cocircuits"] = family_lists(f.cocircuits);
                return emit(c, j.dump(2) + "\n");
            }
            emit(c, "bases: " + family_text(f.bases) + "\ncircuits: " + family_text(f.circuits) + "\ncocircuits: " +
                        family_text(f.cocircuits) + "\n");
        };
    });
    auto* realize_cmd = matroid_cmd->add_subcommand("realize", "presentation from a bases family");
    realize_cmd->add_option("--bases", bases_path, "one basis per line")->required();
    realize_cmd->add_option("--ground", ground, "ground set size")->required();
    realize_cmd->add_option("--out", c.out, "write output to this file");
    realize_cmd->callback([&] {
        action = [&] { emit(c, realize_from_bases(ground, read_family(bases_path)).to_string()); };
    });
    auto* colaug_cmd = matroid_cmd->add_subcommand("colaug", "column fillings that keep the bases");
    colaug_cmd->add_option("--matrix", matrix_path, "0/1 matrix file")->required();
    colaug_cmd->add_option("--column", column, "column to replace (1-based)")->required();
    colaug_cmd->add_option("--out", c.out, "write output to this file");
    colaug_cmd->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    colaug_cmd->callback([&] {
        action = [&] {
            BinaryMatrix q = read_matrix(matrix_path);
            int x = column - 1;
            Family all = colaug(q, x);
            VertexSet top = colaug_maximal(q, x);
            auto low = colaug_minimal(q, x);
            if (structured()) {
                ojson j;
                j["colaug"] = family_lists(all);
                j["maximal"] = family_lists({top});
                j["minimum"] = family_lists(low.minimal);
                j["forced"] = family_lists({low.forced});
                return emit(c, j.dump(2) + "\n");
            }
            emit(c, "colaug: " + family_text(all) + "\nmaximal: " + set_text(top) + "\nminimum: " + family_text(low.minimal) +
                        "\nforced: " + set_text(low.forced) + "\n");
        };
    });

    auto* recover_cmd = app.add_subcommand("recover", "reconstruct a model from a mixing matrix or an exact oracle");
    std::string mixing_path, oracle_path, class_out, log_out, mode = "auto";
    int latents = -1;
    double tol = kDefaultRankTolerance, alpha = 25.0, eps = 0.02;
    recover_cmd->add_option("--mixing", mixing_path, "mixing matrix CSV");
    recover_cmd->add_option("--latents", latents, "number of latent variables");
    recover_cmd->add_option("--oracle", oracle_path, "graph whose path ranks serve as the oracle");
    recover_cmd->add_option("--tol", tol, "relative singular value tolerance");
    recover_cmd->add_option("--confidence-alpha", alpha, "confidence slope");
    recover_cmd->add_option("--confidence-eps", eps, "confidence midpoint");
    recover_cmd->add_option("--mode", mode, "auto, exact or noisy")->check(CLI::IsMember({"auto", "exact", "noisy"}));
    recover_cmd->add_option("--class-out", class_out, "write the class serialization here");
    recover_cmd->add_option("--log", log_out, "write diagnostics here, one event per line");
    recover_cmd->add_option("--out", c.out, "write the seed graph here");
    recover_cmd->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    add_budget(recover_cmd);
    recover_cmd->callback([&] {
        action = [&] {
            json req;
            req["params"] = budget_params();
            req["params"]["mode"] = mode;
            req["params"]["limit"] = std::numeric_limits<long long>::max();
            if (!oracle_path.empty() == !mixing_path.empty()) throw UsageError("give exactly one of --mixing and --oracle");
            if (!oracle_path.empty()) {
                req["graph"] = graph_request(oracle_path)["graph"];
            } else {
                if (latents < 0) throw UsageError("--mixing needs --latents");
                req["matrix"] = read_file(mixing_path);
                req["params"]["latents"] = latents;
                req["params"]["tol"] = tol;
                req["params"]["confidence_alpha"] = alpha;
                req["params"]["confidence_eps"] = eps;
            }
            ojson resp = handle("/recover", req);
            if (!log_out.empty()) {
                std::ofstream f(log_out);
                for (const auto& d : resp["diagnostics"]) f << d.get<std::string>() << "\n";
            }
            if (!resp["ok"].get<bool>()) throw Error(resp["error"]["message"].get<std::string>());
            const auto& p = resp["payload"];
            if (!class_out.empty()) {
                std::ofstream f(class_out);
                f << p["class"].dump(2) << "\n";
            }
            emit(c, structured() ? p.dump(2) + "\n" : serialize_graph(graph_from_json(json::parse(p["seed"].dump()))));
        };
    });

    auto* sim_cmd = app.add_subcommand("simulate", "sample weights and write the mixing matrix");
    std::string graph_path;
    std::uint64_t seed = 0;
    bool scrambled = false;
    sim_cmd->add_option("--graph", graph_path, "graph file")->required();
    sim_cmd->add_option("--seed", seed, "random seed");
    sim_cmd->add_option("--out", c.out, "CSV output file");
    sim_cmd->add_flag("--scramble", scrambled, "permute and rescale the columns");
    sim_cmd->callback([&] {
        action = [&] {
            MixingMatrix a = mixing(sample_weights(load_graph(graph_path), seed));
            if (scrambled) a = scramble(a, seed + 1);
            emit(c, write_mixing_csv(a));
        };
    });

    auto* census_cmd = app.add_subcommand("census", "count digraphs, irreducible models and classes");
    int cn = 0, cl = 0, threads = 0;
    bool allow_six = false;
    census_cmd->add_option("--n", cn, "vertices")->required();
    census_cmd->add_option("--l", cl, "latents (the first l vertices)")->required();
    census_cmd->add_option("--threads", threads, "worker threads (EQUIV_THREADS also caps)");
    census_cmd->add_flag("--allow-six", allow_six, "permit n = 6 (hours)");
    census_cmd->add_option("--out", c.out, "write output to this file");
    census_cmd->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    census_cmd->callback([&] {
        action = [&] {
            CensusOptions o;
            o.threads = threads;
            o.allow_six = allow_six;
            CensusRow r = census(cn, cl, o);
            if (!structured()) return emit(c, format_census_row(r));
            ojson j;
            j["n"] = r.n;
            j["l"] = r.num_latent;
            j["wc_digraphs"] = r.wc_digraphs;
            j["irreducible_with_variants"] = r.irreducible_with_variants;
            j["irreducible_unique"] = r.irreducible_unique;
            j["class_count"] = r.class_count;
            ojson h = ojson::array();
            for (const auto& [size, count] : r.class_size_histogram) h.push_back({size, count});
            j["class_size_histogram"] = h;
            emit(c, j.dump(2) + "\n");
        };
    });

    auto* serve_cmd = app.add_subcommand("serve", "local JSON API");
    int port = 8080;
    std::string host = "127.0.0.1";
    serve_cmd->add_option("--port", port, "TCP port");
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->callback([&] {
        action = [&] {
            serve(host, port, [](const ServerHandle& h) { std::cerr << "listening on port " << h.port << std::endl; });
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
