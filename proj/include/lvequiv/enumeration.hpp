#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lvequiv/digraph.hpp"
#include "lvequiv/equivalence.hpp"

namespace lvequiv {

struct CensusRow {
    int n = 0;
    int num_latent = 0;
    std::uint64_t wc_digraphs = 0;
    std::uint64_t irreducible_with_variants = 0;
    // up to relabeling of the latents
    std::uint64_t irreducible_unique = 0;
    std::uint64_t class_count = 0;
    // class size (members up to latent relabeling) -> number of classes
    std::map<std::uint64_t, std::uint64_t> class_size_histogram;
};

struct CensusOptions {
    int threads = 0;  // 0: thread_count()
    bool allow_six = false;
    // canonical members of every class, sorted by their least member, when set
    std::vector<std::vector<Digraph>>* classes = nullptr;
};

inline constexpr int kCensusMaxVertices = 5;

// Labeled digraphs on n vertices whose first l are latent are coded by their n(n-1) edge bits;
// edge (i, j) is bit i * (n - 1) + (j < i ? j : j - 1).
Digraph digraph_from_code(int n, int num_latent, std::uint64_t code);
std::uint64_t code_of(const Digraph& g);

CensusRow census(int n, int num_latent, const CensusOptions& opts = {});
// "n l wc with_variants unique classes", then one "size count" line per histogram entry.
std::string format_census_row(const CensusRow& row);

// Pairwise equivalence checks over every weakly connected irreducible labeled digraph.
std::vector<std::vector<Digraph>> brute_force_partition(int n, int num_latent);
inline constexpr int kBruteForceMaxVertices = 4;

}  // namespace lvequiv
