#include "lvequiv/irreducibility.hpp"

#include <algorithm>
#include <numeric>

namespace lvequiv {

namespace {

int outside_children(const Digraph& g, VertexSet l) { return popcount(g.children_of(l) & ~l); }

// Subsets here are over latent positions 0..k-1, which coincide with vertex indices.
std::vector<VertexSet> maximal_redundant(const Digraph& g) {
    int k = g.num_latent();
    if (k > kMaxLatentsForSubsets) throw SizeError("too many latent vertices for subset enumeration");
    size_t total = size_t{1} << k;
    std::vector<char> redundant(total, 0), up(total, 0);
    for (size_t s = 1; s < total; ++s) redundant[s] = outside_children(g, s) < 2;
    // up[s]: s or some superset is redundant
    for (size_t s = total; s-- > 1;) {
        char u = redundant[s];
        for (int v = 0; v < k && !u; ++v)
            if (!contains(s, v)) u = up[s | bit(v)];
        up[s] = u;
    }
    std::vector<VertexSet> out;
    for (size_t s = 1; s < total; ++s) {
        if (!redundant[s]) continue;
        bool maximal = true;
        for (int v = 0; v < k && maximal; ++v)
            if (!contains(s, v) && up[s | bit(v)]) maximal = false;
        if (maximal) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](VertexSet a, VertexSet b) { return bits_of(a) < bits_of(b); });
    return out;
}

}  // namespace

bool is_irreducible_exhaustive(const Digraph& g) {
    int k = g.num_latent();
    if (k > kMaxLatentsForSubsets) throw SizeError("too many latent vertices for subset enumeration");
    for (VertexSet s = 1; s < (VertexSet{1} << k); ++s)
        if (outside_children(g, s) < 2) return false;
    return true;
}

bool is_irreducible(const Digraph& g) {
    if (g.is_acyclic()) {
        for (int v = 0; v < g.num_latent(); ++v)
            if (popcount(g.children(v)) < 2) return false;
        return true;
    }
    return is_irreducible_exhaustive(g);
}

ReductionReport reduce_with_order(const Digraph& g, const std::vector<int>& order) {
    ReductionReport rep;
    VertexSet keep = g.ancestors(g.observed());
    for_each_bit(g.all() & ~keep, [&](int v) { rep.removed_vertices.push_back(g.label(v)); });
    Digraph h = g.induced(keep);

    std::vector<VertexSet> mrl = maximal_redundant(h);
    if (!order.empty() && order.size() != mrl.size()) throw PreconditionError("order must permute the maximal redundant sets");
    std::vector<int> idx(mrl.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (!order.empty()) idx = order;

    std::vector<VertexSet> children = h.children_rows();
    VertexSet drop = 0;
    for (int t : idx) {
        VertexSet l = mrl[t];
        VertexSet outside = h.children_of(l) & ~l;
        if (popcount(outside) != 1) throw std::logic_error("redundant set without a unique outside child");
        int c = std::countr_zero(outside);
        VertexSet pa = h.parents_of(l) & ~l & ~bit(c);
        for_each_bit(pa, [&](int p) {
            if (!contains(children[p], c)) {
                children[p] |= bit(c);
                rep.added_edges.emplace_back(h.label(p), h.label(c));
            }
        });
        drop |= l;
    }
    for (VertexSet l : mrl) rep.mrl.push_back(h.labels_of(l));
    for_each_bit(drop, [&](int v) { rep.removed_vertices.push_back(h.label(v)); });
    std::sort(rep.added_edges.begin(), rep.added_edges.end());

    Digraph rewired = Digraph::from_children(h.labels(), h.num_latent(), std::move(children));
    rep.reduced = rewired.induced(rewired.all() & ~drop);
    if (!is_irreducible(rep.reduced)) throw std::logic_error("reduction produced a reducible graph");
    return rep;
}

ReductionReport reduce(const Digraph& g) { return reduce_with_order(g, {}); }

}  // namespace lvequiv
