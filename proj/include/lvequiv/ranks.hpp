#pragma once

#include "lvequiv/binary_matrix.hpp"
#include "lvequiv/digraph.hpp"

namespace lvequiv {

// Z are targets, Y are sources; they may overlap.
struct RankQuery {
    VertexSet targets = 0;
    VertexSet sources = 0;
};

// Maximum number of vertex-disjoint directed paths from Y to Z. A vertex in both counts as a
// path of length zero.
int path_rank(const Digraph& g, const RankQuery& q);
// A smallest vertex set whose removal leaves no directed path from Y to Z.
VertexSet min_vertex_cut(const Digraph& g, const RankQuery& q);
// Maximum matching from Y to Z along edges, where a vertex in both may match itself.
int edge_rank(const Digraph& g, const RankQuery& q);
int matching_rank(const BinaryMatrix& m);
int matching_rank(const BinaryMatrix& m, VertexSet rows, VertexSet cols);
// min(|Z|,|Y|) - path_rank(Z,Y) - (|V| - max(|Z|,|Y|) - edge_rank(V\Y, V\Z)); always zero.
int duality_gap(const Digraph& g, const RankQuery& q);

}  // namespace lvequiv
