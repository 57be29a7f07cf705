#include <algorithm>

#include "lvequiv/errors.hpp"
#include "lvequiv/matching.hpp"
#include "lvequiv/matroid.hpp"

namespace lvequiv {

AlphaSystem alpha_system(const RankTable& r) {
    AlphaSystem sys;
    VertexSet all = r.ground_set();
    Family flats;
    for (VertexSet s = 0; s <= all; ++s) {
        int rs = r.dual_rank(s);
        bool closed = true;
        for_each_bit(all & ~s, [&](int e) { closed = closed && r.dual_rank(s | bit(e)) > rs; });
        if (closed) flats.push_back(s);
    }
    std::stable_sort(flats.begin(), flats.end(), [](VertexSet a, VertexSet b) { return popcount(a) < popcount(b); });
    for (VertexSet f : flats) {
        int a = popcount(f) - r.dual_rank(f);
        for (const auto& [g, ag] : sys.alpha)
            if (g != f && is_subset(g, f)) a -= ag;
        if (a < 0) throw NotTransversal("negative alpha value: the dual is not a strict gammoid");
        sys.alpha[f] = a;
    }
    sys.flats_of_dual = sorted_family(flats);
    for (VertexSet f : sys.flats_of_dual)
        for (int i = 0; i < sys.alpha[f]; ++i) sys.copies.emplace_back(f, i);
    if (static_cast<int>(sys.copies.size()) > 64) throw SizeError("alpha system too large");

    // copies are rows, elements are columns
    std::vector<VertexSet> adj;
    for (const auto& c : sys.copies) adj.push_back(c.first);
    std::vector<int> match;
    int size = adj.empty() ? 0 : max_matching(adj, &match);
    if (size != static_cast<int>(sys.copies.size()))
        throw NotTransversal("alpha system has no matching covering every flat copy");
    sys.matched_element = match;
    VertexSet matched = 0;
    for (int e : match) matched |= bit(e);
    sys.unmatched = all & ~matched;
    return sys;
}

BinaryMatrix realize_from_rank_table(const RankTable& r) {
    AlphaSystem sys = alpha_system(r);
    std::vector<std::pair<int, VertexSet>> cols;  // (element t, flat F_t)
    for (size_t k = 0; k < sys.copies.size(); ++k) cols.emplace_back(sys.matched_element[k], sys.copies[k].first);
    std::sort(cols.begin(), cols.end());
    std::vector<VertexSet> columns;
    for (const auto& c : cols) columns.push_back(c.second);
    BinaryMatrix h = BinaryMatrix::from_columns(r.ground(), columns);
    if (!(RankTable::of_presentation(h) == r))
        throw NotTransversal("the family is a matroid but not a transversal one");
    return h;
}

BinaryMatrix realize_from_bases(int ground_size, const Family& bases) {
    Family b = sorted_family(bases);
    RankTable table = RankTable::of_bases(ground_size, b);
    if (!satisfies_exchange(b, ground_size)) throw NotAMatroid("basis exchange fails");
    return realize_from_rank_table(table);
}

}  // namespace lvequiv
