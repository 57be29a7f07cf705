#include "lvequiv/matroid.hpp"

#include <algorithm>

#include "lvequiv/errors.hpp"
#include "lvequiv/matching.hpp"

namespace lvequiv {

namespace {

bool family_less(VertexSet a, VertexSet b) {
    // lexicographic on ascending index lists: compare at the lowest differing element
    while (a && b) {
        int x = std::countr_zero(a), y = std::countr_zero(b);
        if (x != y) return x < y;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

void check_ground(int m) {
    if (m < 0 || m > kMaxGround)
        throw SizeError("ground set of size " + std::to_string(m) + " exceeds the cap of " + std::to_string(kMaxGround));
}

}  // namespace

void sort_family(Family& f) {
    std::sort(f.begin(), f.end(), family_less);
    f.erase(std::unique(f.begin(), f.end()), f.end());
}

Family sorted_family(Family f) {
    sort_family(f);
    return f;
}

std::vector<std::vector<int>> family_lists(const Family& f) {
    std::vector<std::vector<int>> out;
    for (VertexSet s : sorted_family(f)) out.push_back(bits_of(s));
    return out;
}

Family family_from_lists(const std::vector<std::vector<int>>& lists) {
    Family f;
    for (const auto& l : lists) f.push_back(mask_of(l));
    return f;
}

RankTable::RankTable(int ground, std::vector<std::uint8_t> ranks) : ground_(ground), ranks_(std::move(ranks)) {
    check_ground(ground);
    if (ranks_.size() != (size_t{1} << ground)) throw SizeError("rank table size mismatch");
}

RankTable RankTable::of_presentation(const BinaryMatrix& q) { return of_presentation(q, low_bits(q.cols())); }

RankTable RankTable::of_presentation(const BinaryMatrix& q, VertexSet cols) {
    int m = q.rows();
    check_ground(m);
    std::vector<std::uint8_t> r(size_t{1} << m, 0);
    std::vector<VertexSet> rows = q.row_bits();
    for (auto& x : rows) x &= cols;
    for (VertexSet s = 1; s < (VertexSet{1} << m); ++s) {
        // adding one element raises the rank by at most one
        int top = 63 - std::countl_zero(s);
        int below = r[s & ~bit(top)];
        if (!rows[top]) {
            r[s] = static_cast<std::uint8_t>(below);
            continue;
        }
        r[s] = static_cast<std::uint8_t>(submatrix_matching_rank(rows, s, cols));
    }
    return RankTable(m, std::move(r));
}

RankTable RankTable::of_bases(int ground, const Family& bases) {
    check_ground(ground);
    if (bases.empty()) throw NotAMatroid("a matroid has at least one basis");
    int k = popcount(bases.front());
    size_t total = size_t{1} << ground;
    std::vector<char> indep(total, 0);
    for (VertexSet b : bases) {
        if (b & ~low_bits(ground)) throw NotAMatroid("basis outside the ground set");
        if (popcount(b) != k) throw NotAMatroid("bases are not equicardinal");
        indep[b] = 1;
    }
    for (size_t s = total; s-- > 0;) {
        if (!indep[s]) continue;
        for_each_bit(s, [&](int e) { indep[s & ~bit(e)] = 1; });
    }
    std::vector<std::uint8_t> r(total, 0);
    for (size_t s = 1; s < total; ++s) {
        if (indep[s]) {
            r[s] = static_cast<std::uint8_t>(popcount(s));
        } else {
            std::uint8_t best = 0;
            for_each_bit(s, [&](int e) { best = std::max(best, r[s & ~bit(e)]); });
            r[s] = best;
        }
    }
    return RankTable(ground, std::move(r));
}

int RankTable::dual_rank(VertexSet s) const {
    return popcount(s) + rank(ground_set() & ~s) - full_rank();
}

Family RankTable::bases() const {
    Family out;
    int k = full_rank();
    for_each_k_subset(ground_set(), k, [&](VertexSet s) {
        if (rank(s) == k) out.push_back(s);
    });
    sort_family(out);
    return out;
}

Family RankTable::independent_sets() const {
    Family out;
    for (VertexSet s = 0; s <= ground_set(); ++s)
        if (independent(s)) out.push_back(s);
    sort_family(out);
    return out;
}

Family RankTable::circuits() const {
    Family out;
    for (VertexSet s = 1; s <= ground_set(); ++s) {
        int k = popcount(s);
        if (rank(s) != k - 1) continue;
        bool minimal = true;
        for_each_bit(s, [&](int e) { minimal = minimal && rank(s & ~bit(e)) == k - 1; });
        if (minimal) out.push_back(s);
    }
    sort_family(out);
    return out;
}

Family RankTable::flats() const {
    Family out;
    VertexSet all = ground_set();
    for (VertexSet s = 0; s <= all; ++s) {
        int rs = rank(s);
        bool closed = true;
        for_each_bit(all & ~s, [&](int e) { closed = closed && rank(s | bit(e)) > rs; });
        if (closed) out.push_back(s);
    }
    sort_family(out);
    return out;
}

Family RankTable::cocircuits() const {
    Family out;
    int k = full_rank();
    for (VertexSet h : flats())
        if (rank(h) == k - 1) out.push_back(ground_set() & ~h);
    sort_family(out);
    return out;
}

VertexSet RankTable::coloops() const {
    VertexSet out = 0;
    for (int e = 0; e < ground_; ++e)
        if (rank(ground_set() & ~bit(e)) < full_rank()) out |= bit(e);
    return out;
}

TransversalMatroid::TransversalMatroid(BinaryMatrix presentation)
    : presentation_(std::move(presentation)), table_(RankTable::of_presentation(presentation_)) {}

MatroidFamilies families(const RankTable& r) {
    return MatroidFamilies{r.bases(), r.circuits(), r.cocircuits(), r.coloops(), r.flats()};
}

MatroidFamilies families(const TransversalMatroid& m) { return families(m.table()); }

bool satisfies_exchange(const Family& bases, int ground) {
    check_ground(ground);
    if (bases.empty()) return false;
    std::vector<char> is_basis(size_t{1} << ground, 0);
    int k = popcount(bases.front());
    for (VertexSet b : bases) {
        if ((b & ~low_bits(ground)) || popcount(b) != k) return false;
        is_basis[b] = 1;
    }
    for (VertexSet b1 : bases)
        for (VertexSet b2 : bases) {
            if (b1 == b2) continue;
            bool ok = true;
            for_each_bit(b1 & ~b2, [&](int e) {
                if (!ok) return;
                bool found = false;
                for_each_bit(b2 & ~b1, [&](int f) { found = found || is_basis[(b1 & ~bit(e)) | bit(f)]; });
                ok = found;
            });
            if (!ok) return false;
        }
    return true;
}

bool verify_family_axioms(const RankTable& r) {
    auto f = families(r);
    if (!satisfies_exchange(f.bases, r.ground())) return false;
    size_t total = size_t{1} << r.ground();
    std::vector<char> has_circuit(total, 0);
    for (VertexSet c : f.circuits) has_circuit[c] = 1;
    for (size_t s = 1; s < total; ++s) {
        if (!has_circuit[s]) for_each_bit(s, [&](int e) { has_circuit[s] |= has_circuit[s & ~bit(e)]; });
        bool dependent = !r.independent(s);
        if (dependent != static_cast<bool>(has_circuit[s])) return false;
    }
    for (VertexSet d : f.cocircuits) {
        for (VertexSet b : f.bases)
            if ((d & b) == 0) return false;
        for (VertexSet c : f.circuits)
            if (popcount(d & c) == 1) return false;
    }
    return true;
}

bool verify_family_axioms(const TransversalMatroid& m) { return verify_family_axioms(m.table()); }

}  // namespace lvequiv
