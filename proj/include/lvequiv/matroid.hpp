#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "lvequiv/binary_matrix.hpp"
#include "lvequiv/bits.hpp"

namespace lvequiv {

// Subsets of the ground set [m]; kept sorted by their ascending index lists.
using Family = std::vector<VertexSet>;

inline constexpr int kMaxGround = 16;

void sort_family(Family& f);
Family sorted_family(Family f);
std::vector<std::vector<int>> family_lists(const Family& f);
Family family_from_lists(const std::vector<std::vector<int>>& lists);

// Rank function of a matroid on [m], tabulated for every subset.
class RankTable {
public:
    RankTable() = default;
    RankTable(int ground, std::vector<std::uint8_t> ranks);
    static RankTable of_presentation(const BinaryMatrix& q);
    static RankTable of_presentation(const BinaryMatrix& q, VertexSet cols);
    // Throws NotAMatroid if the family is empty, not equicardinal or out of range.
    static RankTable of_bases(int ground, const Family& bases);

    int ground() const { return ground_; }
    VertexSet ground_set() const { return low_bits(ground_); }
    int rank(VertexSet s) const { return ranks_[s]; }
    int full_rank() const { return ranks_[ground_set()]; }
    bool independent(VertexSet s) const { return ranks_[s] == popcount(s); }
    int dual_rank(VertexSet s) const;

    Family bases() const;
    Family independent_sets() const;
    Family circuits() const;
    Family cocircuits() const;
    VertexSet coloops() const;
    Family flats() const;

    bool operator==(const RankTable& o) const { return ground_ == o.ground_ && ranks_ == o.ranks_; }

private:
    int ground_ = 0;
    std::vector<std::uint8_t> ranks_;
};

struct MatroidFamilies {
    Family bases;
    Family circuits;
    Family cocircuits;
    VertexSet coloops = 0;
    Family flats;
};

// Matroid on the rows of a binary presentation: a row set is independent when it can be
// matched into distinct columns.
class TransversalMatroid {
public:
    explicit TransversalMatroid(BinaryMatrix presentation);

    const BinaryMatrix& presentation() const { return presentation_; }
    const RankTable& table() const { return table_; }
    int ground_size() const { return presentation_.rows(); }
    int rank(VertexSet s) const { return table_.rank(s); }

private:
    BinaryMatrix presentation_;
    RankTable table_;
};

MatroidFamilies families(const RankTable& r);
MatroidFamilies families(const TransversalMatroid& m);
// Basis exchange, circuits inside every dependent set, and the cocircuit/basis/circuit
// intersection rules.
bool verify_family_axioms(const RankTable& r);
bool verify_family_axioms(const TransversalMatroid& m);
bool satisfies_exchange(const Family& bases, int ground);

struct AlphaSystem {
    Family flats_of_dual;
    std::map<VertexSet, int> alpha;
    // copies[k] = (flat, copy index); matched_element[k] is the element covering it
    std::vector<std::pair<VertexSet, int>> copies;
    std::vector<int> matched_element;
    VertexSet unmatched = 0;
};

AlphaSystem alpha_system(const RankTable& r);
// Builds a presentation whose transversal matroid has exactly the given bases. Columns are the
// matched elements in increasing order.
BinaryMatrix realize_from_bases(int ground_size, const Family& bases);
BinaryMatrix realize_from_rank_table(const RankTable& r);

// All column fillings D for column x that keep bases(Q) unchanged.
Family colaug(const BinaryMatrix& q, int x);
Family colaug_brute_force(const BinaryMatrix& q, int x);
VertexSet colaug_maximal(const BinaryMatrix& q, int x);
struct ColaugMinimal {
    Family minimal;
    VertexSet forced = 0;
};
ColaugMinimal colaug_minimal(const BinaryMatrix& q, int x);
Family colaug_hasse_neighbors(const BinaryMatrix& q, int x, VertexSet d);

// Same constructions when the matroids are known only through rank tables: `with_x` is the
// matroid including the column, `without_x` the one on the remaining columns.
VertexSet colaug_maximal(const RankTable& with_x, const RankTable& without_x);
ColaugMinimal colaug_minimal(const RankTable& with_x, const RankTable& without_x);

}  // namespace lvequiv
