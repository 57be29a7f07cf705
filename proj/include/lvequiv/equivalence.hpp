#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lvequiv/digraph.hpp"
#include "lvequiv/matroid.hpp"

namespace lvequiv {

// Target sets Z with a perfect edge matching from Y (self-matches allowed).
struct ChildrenBases {
    VertexSet sources = 0;
    Family family;
};

ChildrenBases children_bases(const Digraph& g, VertexSet y);

struct EquivalenceCheck {
    bool equivalent = false;
    // vertex_map[v] is the vertex of g that vertex v of h is mapped to.
    std::vector<int> vertex_map;
};

// Both graphs must be irreducible with the same observed labels.
EquivalenceCheck check_equivalent(const Digraph& g, const Digraph& h);

// Single-edge edits that keep the class. The criterion is stated for irreducible graphs; it
// is not re-checked here.
bool can_add_edge(const Digraph& g, int tail, int head);
bool can_delete_edge(const Digraph& g, int tail, int head);

enum class EditKind { add, remove };
struct EdgeEdit {
    int tail;
    int head;
    EditKind kind;
    bool admissible;
};
// Every absent non-loop edge (addability) and every present edge (deletability).
std::vector<EdgeEdit> edge_admissibility(const Digraph& g);
std::vector<EdgeEdit> admissible_edits(const Digraph& g);

// Least children rows over all latent relabelings.
std::vector<VertexSet> canonical_key(const Digraph& g);
Digraph canonical_form(const Digraph& g);

enum class TransitionKind { edge_add, edge_delete, cycle_reversal };
std::string to_string(TransitionKind k);

struct Transition {
    int from_index;
    int to_index;
    TransitionKind kind;
    bool operator==(const Transition&) const = default;
};

struct TraversalBudget {
    long long max_members = 1000000;
    double max_seconds = 600.0;
    // called with the number of members found so far, every `progress_every` expansions
    std::function<void(std::size_t)> on_progress;
    std::size_t progress_every = 256;
};

struct EquivalenceClass {
    std::vector<Digraph> members;  // canonical forms sorted by canonical key
    // An edit link appears twice (edge_add from the smaller graph, edge_delete back);
    // a reversal link appears once, from the lower to the higher index.
    std::vector<Transition> transitions;
    int seed_index = 0;
    bool complete = true;
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(std::shared_ptr<EquivalenceClass> partial)
        : Error("traversal budget exceeded after " + std::to_string(partial->members.size()) + " members"),
          partial_(std::move(partial)) {}
    const char* kind() const noexcept override { return "budget_exceeded"; }
    const EquivalenceClass& partial() const { return *partial_; }

private:
    std::shared_ptr<EquivalenceClass> partial_;
};

// Breadth-first search over admissible edge edits and disjoint cycle reversals.
EquivalenceClass traverse_class(const Digraph& g, const TraversalBudget& budget = {});

struct Presentation {
    Digraph base;
    std::vector<Edge> solid_edges;
    std::vector<Edge> dashed_edges;
};

// Maximal member of g's cycle-reversal configuration, with the edges shared by every member
// of that configuration marked solid.
Presentation presentation(const Digraph& g);

}  // namespace lvequiv
