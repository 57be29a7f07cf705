#include <doctest.h>

#include <chrono>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "lvequiv/equivalence.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/ranks.hpp"
#include "oracles.hpp"

using namespace lvequiv;

namespace {

Family brute_children_bases(const Digraph& g, VertexSet y) {
    Family out;
    int k = popcount(y);
    for_each_k_subset(g.all(), k, [&](VertexSet z) {
        if (oracle::edge_rank(g, z, y) == k) out.push_back(z);
    });
    return sorted_family(out);
}

Digraph random_irreducible(std::mt19937_64& rng, int n, int l, double p) {
    while (true) {
        auto g = oracle::random_digraph(rng, n, l, p);
        if (is_irreducible(g)) return g;
    }
}

// Graphs reachable from g by admissible single-edge edits only, without relabeling.
std::vector<Digraph> edit_component(const Digraph& g) {
    std::set<std::vector<VertexSet>> seen{g.children_rows()};
    std::deque<Digraph> queue{g};
    std::vector<Digraph> out;
    while (!queue.empty()) {
        Digraph m = queue.front();
        queue.pop_front();
        out.push_back(m);
        for (const auto& e : admissible_edits(m)) {
            Digraph h = e.kind == EditKind::add ? m.with_edge(e.tail, e.head) : m.without_edge(e.tail, e.head);
            if (seen.insert(h.children_rows()).second) queue.push_back(h);
        }
    }
    return out;
}

std::set<std::pair<std::string, std::string>> named(const Digraph& g, const std::vector<Edge>& es) {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& e : es) out.insert({g.label(e.tail), g.label(e.head)});
    return out;
}

void check_presentation_properties(const Digraph& g) {
    auto p = presentation(g);
    auto members = edit_component(g);
    bool base_found = false;
    std::vector<VertexSet> inter(g.size(), ~VertexSet{0});
    for (const auto& m : members) {
        if (m == p.base) base_found = true;
        for (int v = 0; v < g.size(); ++v) {
            CHECK(is_subset(m.children(v), p.base.children(v)));
            inter[v] &= m.children(v);
        }
    }
    CHECK(base_found);
    std::vector<VertexSet> solid(g.size(), 0);
    for (const auto& e : p.solid_edges) solid[e.tail] |= bit(e.head);
    CHECK(solid == inter);
    CHECK(p.solid_edges.size() + p.dashed_edges.size() == static_cast<size_t>(p.base.num_edges()));
}

}  // namespace

TEST_CASE("children bases") {
    auto g = fixtures::make({"A", "B", "C"}, {}, {{"A", "B"}, {"A", "C"}, {"C", "B"}});
    CHECK(children_bases(g, bit(0)).family == Family{bit(0), bit(1), bit(2)});
    CHECK(children_bases(g, bit(2)).family == Family{bit(1), bit(2)});
    CHECK(children_bases(g, 0).family == Family{0});
    auto g1 = fixtures::two_latent(1);
    auto cb = children_bases(g1, g1.latent());
    CHECK(cb.family == brute_children_bases(g1, g1.latent()));
    for (VertexSet z : cb.family) CHECK(popcount(z) == 2);
    std::mt19937_64 rng(41);
    for (int t = 0; t < 300; ++t) {
        auto h = oracle::random_digraph(rng, 2 + t % 6, 0, 0.35);
        VertexSet y = oracle::random_subset(rng, h.size());
        CHECK(children_bases(h, y).family == brute_children_bases(h, y));
    }
}

TEST_CASE("edge addition examples") {
    auto g1 = fixtures::two_latent(1);
    int x2 = g1.index_of("X2");
    CHECK(can_add_edge(g1, x2, g1.index_of("L2")));
    CHECK_FALSE(can_add_edge(g1, x2, g1.index_of("L1")));
    CHECK_THROWS_AS(can_add_edge(g1, x2, g1.index_of("X3")), PreconditionError);
    CHECK_THROWS_AS(can_add_edge(g1, x2, x2), InvalidGraph);
    auto g2 = fixtures::two_latent(2);
    CHECK(can_delete_edge(g2, x2, g2.index_of("L2")));
}

TEST_CASE("admissible edits follow the coloop criterion and preserve the class") {
    std::mt19937_64 rng(42);
    int moves = 0;
    for (int t = 0; t < 200; ++t) {
        auto g = random_irreducible(rng, 3 + t % 4, 1 + t % 2, 0.4);
        for (const auto& e : edge_admissibility(g)) {
            VertexSet r = g.all() & ~g.children(e.tail) & ~bit(e.tail);
            VertexSet c = g.latent() & ~bit(e.tail);
            if (e.kind == EditKind::add) {
                int with = edge_rank(g, {r, c}), without = edge_rank(g, {r & ~bit(e.head), c});
                CHECK(e.admissible == (without < with));
            } else {
                auto h = g.without_edge(e.tail, e.head);
                CHECK(e.admissible == can_add_edge(h, e.tail, e.head));
            }
            if (e.admissible && moves < 400) {
                auto h = e.kind == EditKind::add ? g.with_edge(e.tail, e.head) : g.without_edge(e.tail, e.head);
                if (is_irreducible(h)) {
                    CHECK(check_equivalent(g, h).equivalent);
                    ++moves;
                }
            }
        }
    }
    CHECK(moves > 100);
}

TEST_CASE("equivalence checks") {
    CHECK(check_equivalent(fixtures::two_latent(1), fixtures::two_latent(2)).equivalent);
    CHECK_FALSE(check_equivalent(fixtures::two_latent(1), fixtures::one_latent(1)).equivalent);
    auto self = check_equivalent(fixtures::two_latent(1), fixtures::two_latent(1));
    CHECK(self.equivalent);
    CHECK(self.vertex_map == std::vector<int>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(check_equivalent(fixtures::reduce_left(), fixtures::reduce_left()), PreconditionError);
    for (int a = 1; a <= 10; ++a)
        for (int b = 1; b <= 10; ++b)
            if (a != b) CHECK(check_equivalent(fixtures::one_latent(a), fixtures::one_latent(b)).equivalent);
}

TEST_CASE("equivalence agrees with class membership") {
    auto cls = traverse_class(fixtures::one_latent(1));
    std::set<std::vector<VertexSet>> keys;
    for (const auto& m : cls.members) keys.insert(canonical_key(m));
    std::mt19937_64 rng(43);
    int negatives = 0;
    for (int t = 0; t < 400; ++t) {
        auto h = oracle::random_digraph(rng, 4, 1, 0.45);
        if (!is_irreducible(h)) continue;
        bool member = keys.count(canonical_key(h)) > 0;
        auto m = fixtures::one_latent(1 + t % 10);
        CHECK(check_equivalent(m, h).equivalent == member);
        if (!member) ++negatives;
    }
    CHECK(negatives > 50);
}

TEST_CASE("two-latent class has six members") {
    auto cls = traverse_class(fixtures::two_latent(1));
    CHECK(cls.members.size() == 6);
    std::set<std::vector<VertexSet>> expected;
    for (int k = 1; k <= 6; ++k) expected.insert(canonical_key(fixtures::two_latent(k)));
    std::set<std::vector<VertexSet>> got;
    for (const auto& m : cls.members) got.insert(canonical_key(m));
    CHECK(got == expected);
}

TEST_CASE("one-latent class has ten members and the drawn transitions") {
    auto cls = traverse_class(fixtures::one_latent(1));
    REQUIRE(cls.members.size() == 10);
    std::map<std::vector<VertexSet>, int> fig;
    for (int k = 1; k <= 10; ++k) fig[canonical_key(fixtures::one_latent(k))] = k;
    std::vector<int> label(10);
    for (int i = 0; i < 10; ++i) {
        REQUIRE(fig.count(canonical_key(cls.members[i])));
        label[i] = fig[canonical_key(cls.members[i])];
    }
    std::set<std::pair<int, int>> edits, reversals;
    for (const auto& t : cls.transitions) {
        std::pair<int, int> p{std::min(label[t.from_index], label[t.to_index]), std::max(label[t.from_index], label[t.to_index])};
        (t.kind == TransitionKind::cycle_reversal ? reversals : edits).insert(p);
    }
    CHECK(edits == std::set<std::pair<int, int>>{{1, 5}, {2, 6}, {3, 7}, {4, 7}, {5, 8}, {6, 9}, {7, 10}});
    CHECK(reversals == std::set<std::pair<int, int>>{{1, 3}, {2, 4}, {5, 6}, {6, 7}, {5, 7}, {8, 10}, {9, 10}, {8, 9}});
    int adds = 0, dels = 0;
    for (const auto& t : cls.transitions) {
        if (t.kind == TransitionKind::edge_add) {
            ++adds;
            CHECK(cls.members[t.from_index].num_edges() + 1 == cls.members[t.to_index].num_edges());
        }
        if (t.kind == TransitionKind::edge_delete) ++dels;
    }
    CHECK(adds == 7);
    CHECK(dels == 7);
}

TEST_CASE("bottleneck graph class sizes") {
    CHECK(traverse_class(fixtures::bottleneck(4, 4, {"C1", "C2"})).members.size() == 17);
    CHECK(traverse_class(fixtures::bottleneck(4, 4, {"Y1", "Y2"})).members.size() == 872);
    CHECK(traverse_class(fixtures::bottleneck(4, 4, {"Y1", "C1"})).members.size() == 1024);
}

TEST_CASE("traversal is closed and sound") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 40; ++t) {
        auto g = random_irreducible(rng, 4 + t % 2, 1 + t % 2, 0.4);
        auto cls = traverse_class(g);
        std::set<std::vector<VertexSet>> keys;
        for (const auto& m : cls.members) keys.insert(canonical_key(m));
        CHECK(keys.count(canonical_key(g)));
        CHECK(cls.members[cls.seed_index] == canonical_form(g));
        auto other = traverse_class(cls.members[rng() % cls.members.size()]);
        CHECK(other.members == cls.members);
        for (size_t k = 0; k < cls.transitions.size() && k < 20; ++k) {
            const auto& tr = cls.transitions[k];
            CHECK(check_equivalent(cls.members[tr.from_index], cls.members[tr.to_index]).equivalent);
        }
        // ancestral relations among observed vertices are shared by all members
        auto anc = [](const Digraph& m) {
            std::vector<VertexSet> out;
            for_each_bit(m.observed(), [&](int x) { out.push_back(m.ancestors(bit(x)) & m.observed()); });
            return out;
        };
        for (const auto& m : cls.members) CHECK(anc(m) == anc(g));
    }
}

TEST_CASE("traversal budget yields a flagged partial result") {
    TraversalBudget b;
    b.max_members = 5;
    try {
        traverse_class(fixtures::bottleneck(4, 4, {"Y1", "Y2"}), b);
        FAIL("expected the budget to run out");
    } catch (const BudgetExceeded& e) {
        CHECK_FALSE(e.partial().complete);
        CHECK(e.partial().members.size() >= 5);
    }
    CHECK_THROWS_AS(traverse_class(fixtures::reduce_left()), PreconditionError);
}

TEST_CASE("presentations of the two drawn configurations") {
    auto left = presentation(fixtures::two_latent(1));
    CHECK(left.base == fixtures::two_latent(2));
    CHECK(named(left.base, left.solid_edges) ==
          std::set<std::pair<std::string, std::string>>{{"L1", "X1"}, {"L1", "X2"}, {"L2", "X2"}, {"L2", "X3"}});
    CHECK(named(left.base, left.dashed_edges) == std::set<std::pair<std::string, std::string>>{{"X2", "L2"}, {"X2", "X3"}});
    check_presentation_properties(fixtures::two_latent(1));

    auto right = presentation(fixtures::one_latent(3));
    CHECK(right.base == fixtures::one_latent(7));
    CHECK(named(right.base, right.solid_edges) ==
          std::set<std::pair<std::string, std::string>>{{"L", "X1"}, {"L", "X2"}, {"X2", "X3"}});
    CHECK(named(right.base, right.dashed_edges) ==
          std::set<std::pair<std::string, std::string>>{{"X3", "X1"}, {"X3", "X2"}, {"X3", "L"}});
    for (int k : {3, 4, 7, 10}) {
        CHECK(presentation(fixtures::one_latent(k)).base == fixtures::one_latent(7));
        check_presentation_properties(fixtures::one_latent(k));
    }
}

TEST_CASE("presentation of a singleton class") {
    auto g = fixtures::make({"X1", "X2"}, {}, {{"X1", "X2"}});
    auto p = presentation(g);
    CHECK(p.base == g);
    CHECK(p.dashed_edges.empty());
    CHECK(p.solid_edges.size() == 1);
}

TEST_CASE("presentation properties on random models") {
    std::mt19937_64 rng(45);
    for (int t = 0; t < 150; ++t) {
        int n = 3 + t % 4;
        auto g = random_irreducible(rng, n, std::min(t % 3, (n - 1) / 2), 0.35);
        CAPTURE(g.children_rows());
        check_presentation_properties(g);
    }
}
