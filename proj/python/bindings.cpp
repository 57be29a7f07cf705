#include "lvequiv/enumeration.hpp"
#include "lvequiv/equivalence.hpp"
#include "lvequiv/glvling.hpp"
#include "lvequiv/graph_io.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/mixing.hpp"
#include "lvequiv/ranks.hpp"
#include "lvequiv/service.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace lvequiv;

namespace {

using LabelEdges = std::vector<std::pair<std::string, std::string>>;

LabelEdges named_edges(const Digraph& g, const std::vector<Edge>& es) {
    LabelEdges out;
    for (const auto& e : es) out.emplace_back(g.label(e.tail), g.label(e.head));
    return out;
}

RankQuery query(const Digraph& g, const std::vector<std::string>& z, const std::vector<std::string>& y) {
    return {g.set_of(z), g.set_of(y)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Latent-variable linear model equivalence: graphs, ranks, classes and recovery";

    // later registrations are tried first, so the base goes in before ParseError
    auto base = py::register_exception<Error>(m, "LvequivError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());

    py::class_<Digraph>(m, "Digraph")
        .def(py::init<const std::vector<std::string>&, const std::vector<std::string>&, const LabelEdges&>(), py::arg("vertices"),
             py::arg("latent"), py::arg("edges"))
        .def_property_readonly("labels", &Digraph::labels)
        .def_property_readonly("latent", [](const Digraph& g) { return g.labels_of(g.latent()); })
        .def_property_readonly("observed", [](const Digraph& g) { return g.labels_of(g.observed()); })
        .def_property_readonly("edges", [](const Digraph& g) { return named_edges(g, g.edges()); })
        .def("__len__", &Digraph::size)
        .def("__eq__", [](const Digraph& a, const Digraph& b) { return a == b; })
        .def("__repr__", [](const Digraph& g) {
            return "<Digraph " + std::to_string(g.size()) + " vertices, " + std::to_string(g.num_latent()) + " latent, " +
                   std::to_string(g.num_edges()) + " edges>";
        })
        .def("to_json", &serialize_graph)
        .def_static("from_json", &parse_graph, py::arg("text"))
        .def_static("load", &load_graph, py::arg("path"))
        .def("save", [](const Digraph& g, const std::string& path) { save_graph(g, path); }, py::arg("path"));

    m.def("is_irreducible", &is_irreducible, py::arg("graph"));
    m.def(
        "reduce",
        [](const Digraph& g) {
            auto r = reduce(g);
            py::dict out;
            out["graph"] = r.reduced;
            out["removed_vertices"] = r.removed_vertices;
            out["added_edges"] = r.added_edges;
            return out;
        },
        py::arg("graph"));

    m.def("path_rank", [](const Digraph& g, const std::vector<std::string>& z, const std::vector<std::string>& y) { return path_rank(g, query(g, z, y)); },
          py::arg("graph"), py::arg("z"), py::arg("y"));
    m.def("edge_rank", [](const Digraph& g, const std::vector<std::string>& z, const std::vector<std::string>& y) { return edge_rank(g, query(g, z, y)); },
          py::arg("graph"), py::arg("z"), py::arg("y"));
    m.def("duality_gap", [](const Digraph& g, const std::vector<std::string>& z, const std::vector<std::string>& y) { return duality_gap(g, query(g, z, y)); },
          py::arg("graph"), py::arg("z"), py::arg("y"));

    m.def(
        "check_equivalent",
        [](const Digraph& g, const Digraph& h) {
            auto c = check_equivalent(g, h);
            std::map<std::string, std::string> vmap;
            if (c.equivalent)
                for (int v = 0; v < h.size(); ++v) vmap[h.label(v)] = g.label(c.vertex_map[v]);
            return py::make_tuple(c.equivalent, vmap);
        },
        py::arg("g"), py::arg("h"));
    m.def(
        "edge_admissibility",
        [](const Digraph& g) {
            py::list out;
            for (const auto& e : edge_admissibility(g))
                out.append(py::make_tuple(g.label(e.tail), g.label(e.head), e.kind == EditKind::add ? "add" : "delete", e.admissible));
            return out;
        },
        py::arg("graph"));
    m.def(
        "equivalence_class",
        [](const Digraph& g, long long max_members, double max_seconds) {
            TraversalBudget b;
            b.max_members = max_members;
            b.max_seconds = max_seconds;
            EquivalenceClass c;
            {
                py::gil_scoped_release release;
                c = traverse_class(g, b);
            }
            py::list transitions;
            for (const auto& t : c.transitions) transitions.append(py::make_tuple(t.from_index, t.to_index, to_string(t.kind)));
            py::dict out;
            out["members"] = c.members;
            out["transitions"] = transitions;
            out["seed_index"] = c.seed_index;
            return out;
        },
        py::arg("graph"), py::arg("max_members") = 1000000, py::arg("max_seconds") = 600.0);
    m.def(
        "presentation",
        [](const Digraph& g) {
            auto p = presentation(g);
            py::dict out;
            out["base"] = p.base;
            out["solid"] = named_edges(p.base, p.solid_edges);
            out["dashed"] = named_edges(p.base, p.dashed_edges);
            return out;
        },
        py::arg("graph"));

    m.def(
        "census",
        [](int n, int l, int threads) {
            CensusOptions o;
            o.threads = threads;
            CensusRow r;
            {
                py::gil_scoped_release release;
                r = census(n, l, o);
            }
            py::dict out;
            out["wc_digraphs"] = r.wc_digraphs;
            out["irreducible_with_variants"] = r.irreducible_with_variants;
            out["irreducible_unique"] = r.irreducible_unique;
            out["class_count"] = r.class_count;
            out["class_size_histogram"] = r.class_size_histogram;
            return out;
        },
        py::arg("n"), py::arg("num_latent"), py::arg("threads") = 0);

    m.def(
        "mixing",
        [](const Digraph& g, std::uint64_t seed, std::optional<std::uint64_t> scramble_seed) {
            auto a = mixing(sample_weights(g, seed));
            if (scramble_seed) a = scramble(a, *scramble_seed);
            return a.values;
        },
        py::arg("graph"), py::arg("seed") = 0, py::arg("scramble_seed") = py::none(),
        "Observed rows of (I - B)^-1 for sampled generic weights; columns optionally permuted and rescaled.");
    m.def(
        "recover",
        [](const Eigen::MatrixXd& a, int num_latent, double tol, bool traverse) {
            MixingMatrix mm;
            mm.values = a;
            for (int r = 0; r < a.rows(); ++r) mm.row_labels.push_back("X" + std::to_string(r + 1));
            RecoverOptions o;
            o.traverse = traverse;
            RecoveryResult r;
            {
                py::gil_scoped_release release;
                r = recover_from_mixing(mm, num_latent, tol, {}, o);
            }
            py::dict out;
            out["seed"] = r.seed;
            out["noisy"] = r.noisy;
            out["repaired"] = r.repaired;
            out["diagnostics"] = r.diagnostics;
            if (r.equivalence_class) out["members"] = r.equivalence_class->members;
            return out;
        },
        py::arg("mixing"), py::arg("num_latent"), py::arg("tol") = kDefaultRankTolerance, py::arg("traverse") = true);

    m.def("handle", [](const std::string& endpoint, const std::string& body) { return handle_text(endpoint, body); }, py::arg("endpoint"),
          py::arg("body"), "Service endpoint call on a JSON text body; returns the JSON envelope text.");
    m.def("endpoints", &endpoints);
}
