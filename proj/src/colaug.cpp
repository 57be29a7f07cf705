#include <deque>
#include <set>

#include "lvequiv/errors.hpp"
#include "lvequiv/matching.hpp"
#include "lvequiv/matroid.hpp"

namespace lvequiv {

namespace {

void check_column(const BinaryMatrix& q, int x) {
    if (x < 0 || x >= q.cols()) throw PreconditionError("column index out of range");
    if (q.rows() > kMaxGround) throw SizeError("too many rows for column augmentation");
}

VertexSet other_columns(const BinaryMatrix& q, int x) { return low_bits(q.cols()) & ~bit(x); }

// Compares bases of q with column x replaced by D against the reference bases.
class BasesMatcher {
public:
    BasesMatcher(const BinaryMatrix& q, int x) : q_(q), x_(x), table_(RankTable::of_presentation(q)) {
        k_ = table_.full_rank();
        for_each_k_subset(table_.ground_set(), k_, [&](VertexSet s) { candidates_.push_back(s); });
    }

    bool same_bases(VertexSet d) const {
        std::vector<VertexSet> rows = q_.with_column(x_, d).row_bits();
        if (submatrix_matching_rank(rows, table_.ground_set(), low_bits(q_.cols())) != k_) return false;
        for (VertexSet s : candidates_) {
            bool basis = submatrix_matching_rank(rows, s, low_bits(q_.cols())) == k_;
            if (basis != table_.independent(s)) return false;
        }
        return true;
    }

private:
    const BinaryMatrix& q_;
    int x_;
    RankTable table_;
    int k_ = 0;
    std::vector<VertexSet> candidates_;
};

}  // namespace

Family colaug_brute_force(const BinaryMatrix& q, int x) {
    check_column(q, x);
    BasesMatcher m(q, x);
    Family out;
    for (VertexSet d = 0; d <= low_bits(q.rows()); ++d)
        if (m.same_bases(d)) out.push_back(d);
    sort_family(out);
    return out;
}

Family colaug(const BinaryMatrix& q, int x) {
    check_column(q, x);
    BasesMatcher m(q, x);
    VertexSet seed = colaug_maximal(q, x);
    if (!m.same_bases(seed)) throw std::logic_error("maximal column augmentation is not a solution");
    std::set<VertexSet> seen{seed};
    std::deque<VertexSet> queue{seed};
    while (!queue.empty()) {
        VertexSet d = queue.front();
        queue.pop_front();
        for (int i = 0; i < q.rows(); ++i) {
            VertexSet e = d ^ bit(i);
            if (seen.count(e) || !m.same_bases(e)) continue;
            seen.insert(e);
            queue.push_back(e);
        }
    }
    return sorted_family(Family(seen.begin(), seen.end()));
}

VertexSet colaug_maximal(const RankTable& with_x, const RankTable& without_x) {
    VertexSet excluded = 0;
    for (VertexSet c : with_x.circuits())
        for_each_bit(c, [&](int i) {
            if (without_x.independent(c & ~bit(i))) excluded |= bit(i);
        });
    return with_x.ground_set() & ~excluded;
}

VertexSet colaug_maximal(const BinaryMatrix& q, int x) {
    check_column(q, x);
    return colaug_maximal(RankTable::of_presentation(q), RankTable::of_presentation(q, other_columns(q, x)));
}

ColaugMinimal colaug_minimal(const RankTable& with_x, const RankTable& without_x) {
    Family before = without_x.cocircuits();
    std::set<VertexSet> old(before.begin(), before.end());
    Family diff;
    for (VertexSet d : with_x.cocircuits())
        if (!old.count(d)) diff.push_back(d);
    ColaugMinimal out;
    if (diff.empty()) {
        out.minimal = {0};
        return out;
    }
    int best = 64;
    for (VertexSet d : diff) best = std::min(best, popcount(d));
    out.forced = with_x.ground_set();
    for (VertexSet d : diff)
        if (popcount(d) == best) {
            out.minimal.push_back(d);
            out.forced &= d;
        }
    sort_family(out.minimal);
    return out;
}

ColaugMinimal colaug_minimal(const BinaryMatrix& q, int x) {
    check_column(q, x);
    return colaug_minimal(RankTable::of_presentation(q), RankTable::of_presentation(q, other_columns(q, x)));
}

Family colaug_hasse_neighbors(const BinaryMatrix& q, int x, VertexSet d) {
    check_column(q, x);
    BasesMatcher m(q, x);
    if (d & ~low_bits(q.rows()) || !m.same_bases(d)) throw PreconditionError("the given column is not a solution");
    Family out;
    for (int i = 0; i < q.rows(); ++i)
        if (m.same_bases(d ^ bit(i))) out.push_back(d ^ bit(i));
    sort_family(out);
    return out;
}

}  // namespace lvequiv
