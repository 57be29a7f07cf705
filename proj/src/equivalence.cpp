#include "lvequiv/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <unordered_set>

#include "lvequiv/irreducibility.hpp"
#include "lvequiv/matching.hpp"

namespace lvequiv {

namespace {

std::vector<VertexSet> support_rows(const Digraph& g) {
    std::vector<VertexSet> rows(g.size());
    for (int v = 0; v < g.size(); ++v) rows[v] = g.parents(v) | bit(v);
    return rows;
}

const std::vector<std::vector<int>>& latent_perms(int l) {
    static std::mutex mu;
    static std::map<int, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(l);
    if (it == cache.end()) {
        if (l > 9) throw SizeError("too many latent vertices for canonical relabeling");
        it = cache.emplace(l, all_permutations(l)).first;
    }
    return it->second;
}

}  // namespace

ChildrenBases children_bases(const Digraph& g, VertexSet y) {
    if (y & ~g.all()) throw InvalidVertex("source set outside the graph");
    ChildrenBases out;
    out.sources = y;
    auto rows = support_rows(g);
    int k = popcount(y);
    VertexSet cand = g.children_of(y) | y;
    std::unordered_set<VertexSet> seen{y};
    std::vector<VertexSet> stack{y};
    while (!stack.empty()) {
        VertexSet z = stack.back();
        stack.pop_back();
        out.family.push_back(z);
        for_each_bit(z, [&](int a) {
            for_each_bit(cand & ~z, [&](int b) {
                VertexSet w = (z & ~bit(a)) | bit(b);
                if (seen.count(w)) return;
                if (submatrix_matching_rank(rows, w, y) == k) {
                    seen.insert(w);
                    stack.push_back(w);
                }
            });
        });
    }
    sort_family(out.family);
    return out;
}

namespace {

struct FamilyTower {
    std::vector<Family> families;                   // L, then L plus each observed vertex
    std::vector<std::vector<int>> single;           // [k][v]
    std::vector<std::vector<std::vector<int>>> pair;  // [k][u][v]
};

FamilyTower tower(const Digraph& g) {
    FamilyTower t;
    int n = g.size();
    t.families.push_back(children_bases(g, g.latent()).family);
    for_each_bit(g.observed(), [&](int x) { t.families.push_back(children_bases(g, g.latent() | bit(x)).family); });
    for (const auto& f : t.families) {
        std::vector<int> s(n, 0);
        std::vector<std::vector<int>> p(n, std::vector<int>(n, 0));
        for (VertexSet b : f) {
            auto idx = bits_of(b);
            for (int u : idx) {
                ++s[u];
                for (int v : idx) ++p[u][v];
            }
        }
        t.single.push_back(std::move(s));
        t.pair.push_back(std::move(p));
    }
    return t;
}

VertexSet map_set(VertexSet s, const std::vector<int>& m) {
    VertexSet out = 0;
    for_each_bit(s, [&](int v) { out |= bit(m[v]); });
    return out;
}

}  // namespace

EquivalenceCheck check_equivalent(const Digraph& g, const Digraph& h) {
    if (!is_irreducible(g) || !is_irreducible(h)) throw PreconditionError("equivalence checks need irreducible models; reduce first");
    EquivalenceCheck out;
    if (g.size() != h.size()) return out;
    if (g.labels_of(g.observed()) != h.labels_of(h.observed()))
        throw PreconditionError("models must share the same observed labels");
    int n = g.size();
    FamilyTower tg = tower(g), th = tower(h);
    size_t K = tg.families.size();
    for (size_t k = 0; k < K; ++k)
        if (tg.families[k].size() != th.families[k].size()) return out;

    // candidates by single-vertex signature
    std::vector<VertexSet> cand(n, 0);
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) {
            bool same = true;
            for (size_t k = 0; k < K && same; ++k) same = th.single[k][v] == tg.single[k][u];
            if (same) cand[v] |= bit(u);
        }
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) {
        order[v] = v;
        if (!cand[v]) return out;
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return popcount(cand[a]) < popcount(cand[b]); });

    std::vector<int> assign(n, -1);
    auto leaf_ok = [&]() {
        for (size_t k = 0; k < K; ++k) {
            Family mapped;
            for (VertexSet b : th.families[k]) mapped.push_back(map_set(b, assign));
            sort_family(mapped);
            if (mapped != tg.families[k]) return false;
        }
        return true;
    };
    std::function<bool(int, VertexSet)> search = [&](int depth, VertexSet used) -> bool {
        if (depth == n) return leaf_ok();
        int v = order[depth];
        VertexSet options = cand[v] & ~used;
        while (options) {
            int u = std::countr_zero(options);
            options &= options - 1;
            bool ok = true;
            for (int d = 0; d < depth && ok; ++d) {
                int v2 = order[d], u2 = assign[v2];
                for (size_t k = 0; k < K && ok; ++k) ok = th.pair[k][v][v2] == tg.pair[k][u][u2];
            }
            if (!ok) continue;
            assign[v] = u;
            if (search(depth + 1, used | bit(u))) return true;
            assign[v] = -1;
        }
        return false;
    };
    if (search(0, 0)) {
        out.equivalent = true;
        out.vertex_map = assign;
    }
    return out;
}

namespace {

struct EditContext {
    std::vector<VertexSet> rows;
    VertexSet nonchildren;
    VertexSet cols;
    int base;
};

EditContext edit_context(const Digraph& g, int i, const std::vector<VertexSet>& rows) {
    EditContext c{rows, g.all() & ~g.children(i) & ~bit(i), g.latent() & ~bit(i), 0};
    c.base = submatrix_matching_rank(c.rows, c.nonchildren, c.cols);
    return c;
}

void check_pair(const Digraph& g, int tail, int head) {
    if (tail < 0 || tail >= g.size() || head < 0 || head >= g.size()) throw InvalidVertex("edge endpoint out of range");
    if (tail == head) throw InvalidGraph("self-loops are never edges");
}

}  // namespace

bool can_add_edge(const Digraph& g, int tail, int head) {
    check_pair(g, tail, head);
    if (g.has_edge(tail, head)) throw PreconditionError("edge already present");
    auto c = edit_context(g, tail, support_rows(g));
    return submatrix_matching_rank(c.rows, c.nonchildren & ~bit(head), c.cols) < c.base;
}

bool can_delete_edge(const Digraph& g, int tail, int head) {
    check_pair(g, tail, head);
    if (!g.has_edge(tail, head)) throw PreconditionError("edge not present");
    // column `tail` is excluded from the ranks, so the graph without the edge has the same rows
    auto c = edit_context(g, tail, support_rows(g));
    return submatrix_matching_rank(c.rows, c.nonchildren | bit(head), c.cols) > c.base;
}

std::vector<EdgeEdit> edge_admissibility(const Digraph& g) {
    std::vector<EdgeEdit> out;
    auto rows = support_rows(g);
    for (int i = 0; i < g.size(); ++i) {
        auto c = edit_context(g, i, rows);
        for (int j = 0; j < g.size(); ++j) {
            if (j == i) continue;
            if (g.has_edge(i, j))
                out.push_back({i, j, EditKind::remove, submatrix_matching_rank(rows, c.nonchildren | bit(j), c.cols) > c.base});
            else
                out.push_back({i, j, EditKind::add, submatrix_matching_rank(rows, c.nonchildren & ~bit(j), c.cols) < c.base});
        }
    }
    return out;
}

std::vector<EdgeEdit> admissible_edits(const Digraph& g) {
    auto all = edge_admissibility(g);
    std::erase_if(all, [](const EdgeEdit& e) { return !e.admissible; });
    return all;
}

std::vector<VertexSet> canonical_key(const Digraph& g) {
    int l = g.num_latent();
    const auto& ch = g.children_rows();
    std::vector<VertexSet> best = ch;
    if (l < 2) return best;
    std::vector<VertexSet> cur(ch.size());
    for (const auto& p : latent_perms(l)) {
        auto map = [&](VertexSet s) {
            VertexSet out = s & ~low_bits(l);
            for_each_bit(s & low_bits(l), [&](int v) { out |= bit(p[v]); });
            return out;
        };
        for (int v = 0; v < g.size(); ++v) cur[v < l ? p[v] : v] = map(ch[v]);
        if (cur < best) best = cur;
    }
    return best;
}

Digraph canonical_form(const Digraph& g) {
    return Digraph::from_children(g.labels(), g.num_latent(), canonical_key(g));
}

std::string to_string(TransitionKind k) {
    switch (k) {
        case TransitionKind::edge_add: return "edge-add";
        case TransitionKind::edge_delete: return "edge-del";
        default: return "cycle-reversal";
    }
}

}  // namespace lvequiv
