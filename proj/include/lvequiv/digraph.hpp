#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvequiv/binary_matrix.hpp"
#include "lvequiv/bits.hpp"
#include "lvequiv/errors.hpp"

namespace lvequiv {

struct Edge {
    int tail;
    int head;
    bool operator==(const Edge&) const = default;
    auto operator<=>(const Edge&) const = default;
};

// A directed graph without self-loops whose first num_latent() vertices are latent.
// Vertex indices follow the ordering convention: latents first, then observed, each sorted by label.
class Digraph {
public:
    Digraph() = default;

    // Labels may come in any order; they are sorted into the canonical vertex order.
    Digraph(const std::vector<std::string>& vertices, const std::vector<std::string>& latent,
            const std::vector<std::pair<std::string, std::string>>& edges);

    // Labels must already be in canonical order with the first num_latent being latent.
    static Digraph from_children(std::vector<std::string> labels, int num_latent,
                                 std::vector<VertexSet> children);
    // Default labels L1..Lk and X1..Xm.
    static Digraph from_children(int n, int num_latent, std::vector<VertexSet> children);
    static Digraph empty(int n, int num_latent);

    static std::vector<std::string> default_labels(int n, int num_latent);

    int size() const { return static_cast<int>(labels_.size()); }
    int num_latent() const { return num_latent_; }
    int num_observed() const { return size() - num_latent_; }
    VertexSet all() const { return low_bits(size()); }
    VertexSet latent() const { return low_bits(num_latent_); }
    VertexSet observed() const { return all() & ~latent(); }
    bool is_latent(int v) const { return v < num_latent_; }

    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int v) const;
    int index_of(const std::string& label) const;
    std::optional<int> find(const std::string& label) const;
    VertexSet set_of(const std::vector<std::string>& labels) const;
    std::vector<std::string> labels_of(VertexSet s) const;

    VertexSet children(int v) const;
    VertexSet parents(int v) const;
    VertexSet children_of(VertexSet s) const;
    VertexSet parents_of(VertexSet s) const;
    const std::vector<VertexSet>& children_rows() const { return children_; }

    bool has_edge(int tail, int head) const { return contains(children_[tail], head); }
    int num_edges() const;
    std::vector<Edge> edges() const;

    Digraph with_edge(int tail, int head) const;
    Digraph without_edge(int tail, int head) const;

    // Reflexive-transitive closure along reversed edges.
    VertexSet ancestors(VertexSet s) const;
    VertexSet descendants(VertexSet s) const;
    bool is_acyclic() const;
    bool is_weakly_connected() const;

    // Keeps the listed vertices, preserving labels and order.
    Digraph induced(VertexSet keep) const;

    // Q[j][i] = 1 iff i == j or i -> j; rows are targets, columns are sources.
    BinaryMatrix support_matrix() const;

    // Same structure, different labels (same count and latent split).
    Digraph relabeled(std::vector<std::string> labels) const;

    bool operator==(const Digraph& o) const {
        return num_latent_ == o.num_latent_ && labels_ == o.labels_ && children_ == o.children_;
    }

private:
    void check_vertex(int v) const;
    void rebuild_parents();

    int num_latent_ = 0;
    std::vector<std::string> labels_;
    std::vector<VertexSet> children_;
    std::vector<VertexSet> parents_;
};

using Cycle = std::vector<int>;  // v0 -> v1 -> ... -> v_{k-1} -> v0

VertexSet parents(const Digraph& g, int v);
VertexSet ancestors(const Digraph& g, VertexSet s);
BinaryMatrix support_matrix(const Digraph& g);

// Reverses on-cycle edges and redirects edges entering a cycle vertex to that vertex's predecessor.
Digraph cycle_reversal(const Digraph& g, const std::vector<Cycle>& cycles);

// Same result as a row permutation of the support matrix. sigma[j] is j's cycle predecessor
// (or j itself) and row j moves to row sigma[j].
Digraph apply_row_permutation(const Digraph& g, const std::vector<int>& sigma);

// Every collection of vertex-disjoint simple cycles, the empty collection included. Each cycle
// starts at its smallest vertex. Collections correspond to permutations supported on the support
// matrix, so they are generated as cycle covers.
std::vector<std::vector<Cycle>> enumerate_disjoint_cycle_sets(const Digraph& g);

// Calls f(sigma) for every nonidentity permutation with sigma[j] = pred(j) on cycle vertices.
template <typename F>
void for_each_cycle_cover(const Digraph& g, F&& f);

std::vector<Cycle> simple_cycles(const Digraph& g);

// perm[i] is the new index of latent i; observed vertices stay put.
Digraph relabel_latents(const Digraph& g, const std::vector<int>& perm);

std::vector<std::vector<int>> all_permutations(int k);

// ---- implementation of the template above ----
namespace detail {
template <typename F>
void cover_dfs(const std::vector<VertexSet>& parents, int n, int row, VertexSet used,
               std::vector<int>& sigma, bool nontrivial, F& f) {
    if (row == n) {
        if (nontrivial) f(static_cast<const std::vector<int>&>(sigma));
        return;
    }
    // row `row` (a target) takes the incoming row of some source s with s -> row or s == row
    VertexSet options = (parents[row] | bit(row)) & ~used;
    for_each_bit(options, [&](int s) {
        sigma[row] = s;
        cover_dfs(parents, n, row + 1, used | bit(s), sigma, nontrivial || s != row, f);
    });
}
}  // namespace detail

template <typename F>
void for_each_cycle_cover(const Digraph& g, F&& f) {
    int n = g.size();
    std::vector<VertexSet> parents(n);
    for (int v = 0; v < n; ++v) parents[v] = g.parents(v);
    std::vector<int> sigma(n);
    detail::cover_dfs(parents, n, 0, 0, sigma, false, f);
}

}  // namespace lvequiv
