#pragma once

#include <vector>

#include "lvequiv/bits.hpp"

namespace lvequiv {

// Hopcroft-Karp on bitmask adjacency: adj[r] is the set of columns (< 64) row r may use.
// Returns the matching size; match_of_row (if given) receives each row's column or -1.
// Rows and columns are visited in index order, so results are deterministic.
int max_matching(const std::vector<VertexSet>& adj, std::vector<int>* match_of_row = nullptr);

// Rank of the submatrix rows x cols of a binary matrix given by row bitmasks.
int submatrix_matching_rank(const std::vector<VertexSet>& rows_bits, VertexSet rows, VertexSet cols);

}  // namespace lvequiv
