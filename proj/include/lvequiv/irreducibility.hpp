#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lvequiv/digraph.hpp"

namespace lvequiv {

struct ReductionReport {
    Digraph reduced;
    std::vector<std::string> removed_vertices;
    std::vector<std::pair<std::string, std::string>> added_edges;
    // Maximal latent sets with fewer than two children outside themselves, by label.
    std::vector<std::vector<std::string>> mrl;
};

// Every nonempty latent subset must have at least two children outside itself.
// Acyclic graphs only need the singleton check.
bool is_irreducible(const Digraph& g);
// Exhaustive check over all latent subsets, no shortcut.
bool is_irreducible_exhaustive(const Digraph& g);

ReductionReport reduce(const Digraph& g);

// Same as reduce but processes the maximal redundant sets in the given order (a permutation of
// their lexicographic order). Exposed so that order independence can be tested.
ReductionReport reduce_with_order(const Digraph& g, const std::vector<int>& order);

inline constexpr int kMaxLatentsForSubsets = 24;

}  // namespace lvequiv
