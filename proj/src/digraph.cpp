#include "lvequiv/digraph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace lvequiv {

bool natural_less(const std::string& a, const std::string& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            size_t i2 = i, j2 = j;
            while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
            while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
            std::string na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
            na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
            nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
            if (na.size() != nb.size()) return na.size() < nb.size();
            if (na != nb) return na < nb;
            i = i2;
            j = j2;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

Digraph::Digraph(const std::vector<std::string>& vertices, const std::vector<std::string>& latent,
                 const std::vector<std::pair<std::string, std::string>>& edges) {
    if (vertices.size() > static_cast<size_t>(kMaxVertices))
        throw SizeError("at most 64 vertices are supported");
    for (const auto& v : vertices)
        if (v.empty()) throw InvalidGraph("empty vertex label");
    std::vector<std::string> lat, obs;
    for (const auto& v : vertices) {
        bool is_lat = std::find(latent.begin(), latent.end(), v) != latent.end();
        (is_lat ? lat : obs).push_back(v);
    }
    for (const auto& l : latent)
        if (std::find(vertices.begin(), vertices.end(), l) == vertices.end())
            throw InvalidVertex("latent label '" + l + "' is not a vertex");
    std::sort(lat.begin(), lat.end(), natural_less);
    std::sort(obs.begin(), obs.end(), natural_less);
    labels_ = lat;
    labels_.insert(labels_.end(), obs.begin(), obs.end());
    for (size_t i = 1; i < labels_.size(); ++i)
        if (labels_[i] == labels_[i - 1]) throw InvalidGraph("duplicate vertex label '" + labels_[i] + "'");
    if (std::adjacent_find(lat.begin(), lat.end()) != lat.end() ||
        std::adjacent_find(obs.begin(), obs.end()) != obs.end())
        throw InvalidGraph("duplicate vertex label");
    num_latent_ = static_cast<int>(lat.size());
    children_.assign(labels_.size(), 0);
    for (const auto& [t, h] : edges) {
        int ti = index_of(t), hi = index_of(h);
        if (ti == hi) throw InvalidGraph("self-loop on '" + t + "'");
        children_[ti] |= bit(hi);
    }
    rebuild_parents();
}

Digraph Digraph::from_children(std::vector<std::string> labels, int num_latent,
                               std::vector<VertexSet> children) {
    if (labels.size() > static_cast<size_t>(kMaxVertices)) throw SizeError("at most 64 vertices are supported");
    if (children.size() != labels.size()) throw InvalidGraph("children rows do not match labels");
    if (num_latent < 0 || num_latent > static_cast<int>(labels.size()))
        throw InvalidGraph("latent count out of range");
    Digraph g;
    g.num_latent_ = num_latent;
    g.labels_ = std::move(labels);
    g.children_ = std::move(children);
    int n = g.size();
    for (int v = 0; v < n; ++v) {
        if (contains(g.children_[v], v)) throw InvalidGraph("self-loop on '" + g.labels_[v] + "'");
        if (g.children_[v] & ~low_bits(n)) throw InvalidVertex("edge to a vertex out of range");
    }
    g.rebuild_parents();
    return g;
}

Digraph Digraph::from_children(int n, int num_latent, std::vector<VertexSet> children) {
    return from_children(default_labels(n, num_latent), num_latent, std::move(children));
}

Digraph Digraph::empty(int n, int num_latent) {
    return from_children(n, num_latent, std::vector<VertexSet>(n, 0));
}

std::vector<std::string> Digraph::default_labels(int n, int num_latent) {
    std::vector<std::string> out;
    for (int i = 0; i < num_latent; ++i) out.push_back("L" + std::to_string(i + 1));
    for (int i = 0; i < n - num_latent; ++i) out.push_back("X" + std::to_string(i + 1));
    return out;
}

void Digraph::rebuild_parents() {
    parents_.assign(labels_.size(), 0);
    for (int v = 0; v < size(); ++v) for_each_bit(children_[v], [&](int c) { parents_[c] |= bit(v); });
}

void Digraph::check_vertex(int v) const {
    if (v < 0 || v >= size()) throw InvalidVertex("vertex index " + std::to_string(v) + " out of range");
}

const std::string& Digraph::label(int v) const {
    check_vertex(v);
    return labels_[v];
}

std::optional<int> Digraph::find(const std::string& label) const {
    for (int v = 0; v < size(); ++v)
        if (labels_[v] == label) return v;
    return std::nullopt;
}

int Digraph::index_of(const std::string& label) const {
    auto v = find(label);
    if (!v) throw InvalidVertex("unknown vertex '" + label + "'");
    return *v;
}

VertexSet Digraph::set_of(const std::vector<std::string>& labels) const {
    VertexSet s = 0;
    for (const auto& l : labels) s |= bit(index_of(l));
    return s;
}

std::vector<std::string> Digraph::labels_of(VertexSet s) const {
    std::vector<std::string> out;
    for_each_bit(s, [&](int v) { out.push_back(label(v)); });
    return out;
}

VertexSet Digraph::children(int v) const {
    check_vertex(v);
    return children_[v];
}

VertexSet Digraph::parents(int v) const {
    check_vertex(v);
    return parents_[v];
}

VertexSet Digraph::children_of(VertexSet s) const {
    VertexSet out = 0;
    for_each_bit(s & all(), [&](int v) { out |= children_[v]; });
    return out;
}

VertexSet Digraph::parents_of(VertexSet s) const {
    VertexSet out = 0;
    for_each_bit(s & all(), [&](int v) { out |= parents_[v]; });
    return out;
}

int Digraph::num_edges() const {
    int m = 0;
    for (auto c : children_) m += popcount(c);
    return m;
}

std::vector<Edge> Digraph::edges() const {
    std::vector<Edge> out;
    for (int v = 0; v < size(); ++v) for_each_bit(children_[v], [&](int c) { out.push_back({v, c}); });
    return out;
}

Digraph Digraph::with_edge(int tail, int head) const {
    check_vertex(tail);
    check_vertex(head);
    if (tail == head) throw InvalidGraph("self-loop on '" + labels_[tail] + "'");
    Digraph g = *this;
    g.children_[tail] |= bit(head);
    g.parents_[head] |= bit(tail);
    return g;
}

Digraph Digraph::without_edge(int tail, int head) const {
    check_vertex(tail);
    check_vertex(head);
    Digraph g = *this;
    g.children_[tail] &= ~bit(head);
    g.parents_[head] &= ~bit(tail);
    return g;
}

VertexSet Digraph::ancestors(VertexSet s) const {
    if (s & ~all()) throw InvalidVertex("vertex set out of range");
    VertexSet seen = s, frontier = s;
    while (frontier) {
        VertexSet next = parents_of(frontier) & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen;
}

VertexSet Digraph::descendants(VertexSet s) const {
    if (s & ~all()) throw InvalidVertex("vertex set out of range");
    VertexSet seen = s, frontier = s;
    while (frontier) {
        VertexSet next = children_of(frontier) & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen;
}

bool Digraph::is_acyclic() const {
    VertexSet left = all();
    while (left) {
        VertexSet sources = 0;
        for_each_bit(left, [&](int v) {
            if ((parents_[v] & left) == 0) sources |= bit(v);
        });
        if (!sources) return false;
        left &= ~sources;
    }
    return true;
}

bool Digraph::is_weakly_connected() const {
    if (size() <= 1) return true;
    VertexSet seen = 1, frontier = 1;
    while (frontier) {
        VertexSet next = (children_of(frontier) | parents_of(frontier)) & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen == all();
}

Digraph Digraph::induced(VertexSet keep) const {
    keep &= all();
    std::vector<int> idx = bits_of(keep);
    std::vector<int> pos(size(), -1);
    for (int k = 0; k < static_cast<int>(idx.size()); ++k) pos[idx[k]] = k;
    std::vector<std::string> labels;
    std::vector<VertexSet> children;
    int lat = 0;
    for (int v : idx) {
        labels.push_back(labels_[v]);
        if (is_latent(v)) ++lat;
        VertexSet row = 0;
        for_each_bit(children_[v] & keep, [&](int c) { row |= bit(pos[c]); });
        children.push_back(row);
    }
    return from_children(std::move(labels), lat, std::move(children));
}

BinaryMatrix Digraph::support_matrix() const {
    std::vector<VertexSet> rows(size());
    for (int j = 0; j < size(); ++j) rows[j] = parents_[j] | bit(j);
    return BinaryMatrix::from_rows(size(), std::move(rows));
}

Digraph Digraph::relabeled(std::vector<std::string> labels) const {
    if (labels.size() != labels_.size()) throw InvalidGraph("label count mismatch");
    return from_children(std::move(labels), num_latent_, children_);
}

VertexSet parents(const Digraph& g, int v) { return g.parents(v); }
VertexSet ancestors(const Digraph& g, VertexSet s) { return g.ancestors(s); }
BinaryMatrix support_matrix(const Digraph& g) { return g.support_matrix(); }

Digraph cycle_reversal(const Digraph& g, const std::vector<Cycle>& cycles) {
    int n = g.size();
    std::vector<int> pred(n, -1);
    VertexSet on_cycle = 0;
    VertexSet cycle_edge_tail_rows[64] = {};
    for (const auto& c : cycles) {
        int k = static_cast<int>(c.size());
        if (k < 2) throw InvalidCycle("a cycle needs at least two vertices");
        for (int t = 0; t < k; ++t) {
            int v = c[t], w = c[(t + 1) % k];
            if (v < 0 || v >= n) throw InvalidCycle("cycle vertex out of range");
            if (contains(on_cycle, v)) throw InvalidCycle("cycles are not vertex-disjoint or not simple");
            on_cycle |= bit(v);
            if (w < 0 || w >= n || !g.has_edge(v, w))
                throw InvalidCycle("cycle edge " + std::to_string(v) + "->" + std::to_string(w) + " is absent");
            pred[w] = v;
            cycle_edge_tail_rows[v] |= bit(w);
        }
    }
    std::vector<VertexSet> children(n, 0);
    for (const auto& e : g.edges()) {
        int i = e.tail, j = e.head;
        if (contains(cycle_edge_tail_rows[i], j) && pred[j] == i)
            children[j] |= bit(i);
        else if (contains(on_cycle, j))
            children[i] |= bit(pred[j]);
        else
            children[i] |= bit(j);
    }
    return Digraph::from_children(g.labels(), g.num_latent(), std::move(children));
}

Digraph apply_row_permutation(const Digraph& g, const std::vector<int>& sigma) {
    int n = g.size();
    if (static_cast<int>(sigma.size()) != n) throw InvalidCycle("permutation length mismatch");
    std::vector<VertexSet> new_parents(n, 0);
    VertexSet seen = 0;
    for (int j = 0; j < n; ++j) {
        int s = sigma[j];
        if (s < 0 || s >= n || contains(seen, s)) throw InvalidCycle("not a permutation");
        seen |= bit(s);
        VertexSet row = g.parents(j) | bit(j);
        if (!contains(row, s)) throw InvalidCycle("permutation not supported on the support matrix");
        new_parents[s] = row & ~bit(s);
    }
    std::vector<VertexSet> children(n, 0);
    for (int v = 0; v < n; ++v) for_each_bit(new_parents[v], [&](int p) { children[p] |= bit(v); });
    return Digraph::from_children(g.labels(), g.num_latent(), std::move(children));
}

std::vector<std::vector<Cycle>> enumerate_disjoint_cycle_sets(const Digraph& g) {
    std::vector<std::vector<Cycle>> out;
    out.push_back({});
    int n = g.size();
    for_each_cycle_cover(g, [&](const std::vector<int>& sigma) {
        std::vector<int> succ(n, -1);
        for (int j = 0; j < n; ++j)
            if (sigma[j] != j) succ[sigma[j]] = j;
        std::vector<Cycle> cycles;
        VertexSet done = 0;
        for (int v = 0; v < n; ++v) {
            if (succ[v] < 0 || contains(done, v)) continue;
            Cycle c;
            for (int w = v; !contains(done, w); w = succ[w]) {
                done |= bit(w);
                c.push_back(w);
            }
            cycles.push_back(std::move(c));
        }
        out.push_back(std::move(cycles));
    });
    return out;
}

namespace {
void cycles_from(const Digraph& g, int start, int v, VertexSet on_path, std::vector<int>& path,
                 std::vector<Cycle>& out) {
    VertexSet allowed = ~low_bits(start);
    for_each_bit(g.children(v) & allowed, [&](int w) {
        if (w == start) {
            out.push_back(path);
        } else if (!contains(on_path, w)) {
            path.push_back(w);
            cycles_from(g, start, w, on_path | bit(w), path, out);
            path.pop_back();
        }
    });
}
}  // namespace

std::vector<Cycle> simple_cycles(const Digraph& g) {
    std::vector<Cycle> out;
    for (int s = 0; s < g.size(); ++s) {
        std::vector<int> path{s};
        cycles_from(g, s, s, bit(s), path, out);
    }
    return out;
}

Digraph relabel_latents(const Digraph& g, const std::vector<int>& perm) {
    int l = g.num_latent();
    if (static_cast<int>(perm.size()) != l) throw InvalidVertex("latent permutation must cover exactly L");
    VertexSet seen = 0;
    for (int p : perm) {
        if (p < 0 || p >= l || contains(seen, p)) throw InvalidVertex("latent permutation must map L onto L");
        seen |= bit(p);
    }
    auto map = [&](int v) { return v < l ? perm[v] : v; };
    std::vector<VertexSet> children(g.size(), 0);
    for (int v = 0; v < g.size(); ++v) {
        VertexSet row = 0;
        for_each_bit(g.children(v), [&](int c) { row |= bit(map(c)); });
        children[map(v)] = row;
    }
    return Digraph::from_children(g.labels(), l, std::move(children));
}

std::vector<std::vector<int>> all_permutations(int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

}  // namespace lvequiv
