#include <doctest.h>

#include <chrono>
#include <map>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "lvequiv/enumeration.hpp"
#include "lvequiv/errors.hpp"
#include "lvequiv/glvling.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/ranks.hpp"
#include "oracles.hpp"

using namespace lvequiv;

namespace {

Digraph random_irreducible(std::mt19937_64& rng, int n, int l, double p) {
    while (true) {
        auto g = oracle::random_digraph(rng, n, l, p);
        if (is_irreducible(g)) return g;
    }
}

std::vector<int> shuffled(std::mt19937_64& rng, int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

RecoverOptions no_traversal() {
    RecoverOptions o;
    o.traverse = false;
    return o;
}

// Answers like a graph oracle except on the listed latent-column queries.
class TamperedOracle : public RankOracle {
public:
    TamperedOracle(const GraphRankOracle& base, std::map<VertexSet, int> overrides)
        : base_(base), overrides_(std::move(overrides)) {}
    int num_rows() const override { return base_.num_rows(); }
    int num_columns() const override { return base_.num_columns(); }
    std::vector<std::string> row_labels() const override { return base_.row_labels(); }
    bool exact() const override { return true; }
    RankAnswer query(VertexSet rows, VertexSet cols) const override {
        auto it = overrides_.find(cols);
        if (rows == low_bits(num_rows()) && it != overrides_.end()) return {it->second, it->second == num_rows() ? 1.0 : 0.0, true};
        return base_.query(rows, cols);
    }

private:
    const GraphRankOracle& base_;
    std::map<VertexSet, int> overrides_;
};

double truncated_normal(std::mt19937_64& rng, double mean) {
    std::normal_distribution<double> d(mean, 0.2);
    while (true) {
        double v = d(rng);
        if (v >= 0.0 && v <= 1.0) return v;
    }
}

}  // namespace

TEST_CASE("recovery from the two-latent example lands in its class") {
    auto g = fixtures::two_latent(1);
    auto r = recover(GraphRankOracle(g), 2);
    CHECK(check_equivalent(g, r.seed).equivalent);
    REQUIRE(r.equivalence_class);
    CHECK(r.equivalence_class->members.size() == 6);
    CHECK(r.equivalence_class->complete);
    CHECK_FALSE(r.noisy);
    CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("latent-free recovery is exact up to cycle reversals") {
    std::mt19937_64 rng(70);
    for (int t = 0; t < 100; ++t) {
        auto g = oracle::random_digraph(rng, 2 + t % 6, 0, 0.35);
        auto r = recover(GraphRankOracle(g, shuffled(rng, g.size())), 0);
        REQUIRE(r.equivalence_class);
        bool found = false;
        for (const auto& m : r.equivalence_class->members) found = found || m == canonical_form(g);
        CHECK(found);
        // with no latents only reversals are available, so every member has the same edge count
        for (const auto& m : r.equivalence_class->members) CHECK(m.num_edges() == g.num_edges());
    }
}

TEST_CASE("every small irreducible model is recovered into its brute-force class") {
    int total = 0;
    for (int n = 2; n <= 4; ++n)
        for (int l = 0; l < n; ++l) {
            auto classes = brute_force_partition(n, l);
            std::map<std::vector<VertexSet>, int> id;
            for (size_t c = 0; c < classes.size(); ++c)
                for (const auto& g : classes[c]) id[canonical_key(g)] = static_cast<int>(c);
            std::mt19937_64 rng(71 + n * 10 + l);
            for (size_t c = 0; c < classes.size(); ++c)
                for (const auto& g : classes[c]) {
                    auto r = recover(GraphRankOracle(g, shuffled(rng, n)), l, no_traversal());
                    auto it = id.find(canonical_key(r.seed));
                    CHECK(it != id.end());
                    if (it != id.end()) CHECK(it->second == static_cast<int>(c));
                    ++total;
                }
        }
    // n = 2: 3 + 0; n = 3: 54 + 16 + 0; n = 4: 3834 + 2000 + 896 + 0
    CHECK(total == 6803);
}

TEST_CASE("seed reproduces every oracle answer") {
    std::mt19937_64 rng(72);
    for (int t = 0; t < 60; ++t) {
        int n = 3 + t % 3;
        auto g = random_irreducible(rng, n, std::min(t % 3, (n - 1) / 2), 0.4);
        GraphRankOracle oracle(g, shuffled(rng, n));
        auto r = recover(oracle, g.num_latent(), no_traversal());
        std::vector<int> seed_rows;
        for (const auto& lab : oracle.row_labels()) seed_rows.push_back(r.seed.index_of(lab));
        for (VertexSet z = 0; z < bit(oracle.num_rows()); ++z)
            for (VertexSet y = 0; y < bit(n); ++y) {
                VertexSet tz = 0, ty = 0;
                for_each_bit(z, [&](int k) { tz |= bit(seed_rows[k]); });
                for_each_bit(y, [&](int k) { ty |= bit(r.column_vertex[k]); });
                CHECK(path_rank(r.seed, {tz, ty}) == oracle.query(z, y).rank);
            }
    }
}

TEST_CASE("scrambled exact-weight mixings are recovered class-exactly") {
    std::mt19937_64 rng(73);
    int exact = 0;
    for (int t = 0; t < 100; ++t) {
        int n = 3 + t % 6;
        int l = std::min(t % 4, (n - 1) / 2);
        auto g = random_irreducible(rng, n, l, 0.35);
        auto a = scramble(mixing(sample_weights(g, 100 + t)), 200 + t);
        auto r = recover_from_mixing(a, l, kDefaultRankTolerance, {}, no_traversal());
        exact += check_equivalent(g, r.seed).equivalent;
    }
    CHECK(exact >= 99);
}

TEST_CASE("one-latent example from its mixing, plain and scrambled") {
    auto g = fixtures::one_latent(1);
    auto a = mixing(sample_weights(g, 9));
    RecoverOptions opts;
    opts.latent_labels = {"L"};
    auto plain = recover_from_mixing(a, 1, kDefaultRankTolerance, {}, opts);
    REQUIRE(plain.equivalence_class);
    CHECK(plain.equivalence_class->members.size() == 10);
    auto mixed = recover_from_mixing(scramble(a, 10), 1, kDefaultRankTolerance, {}, opts);
    REQUIRE(mixed.equivalence_class);
    CHECK(mixed.equivalence_class->members == plain.equivalence_class->members);
}

TEST_CASE("recovery is deterministic") {
    auto g = fixtures::bottleneck(3, 3, {"C1", "C2"});
    auto a = scramble(mixing(sample_weights(g, 1)), 2);
    auto r1 = recover_from_mixing(a, 2);
    auto r2 = recover_from_mixing(a, 2);
    CHECK(r1.seed == r2.seed);
    CHECK(r1.presentation == r2.presentation);
    CHECK(r1.column_vertex == r2.column_vertex);
    RecoverOptions single;
    single.threads = 1;
    CHECK(recover_from_mixing(a, 2, kDefaultRankTolerance, {}, single).seed == r1.seed);
}

TEST_CASE("inconsistent oracles are rejected") {
    auto g = fixtures::two_latent(1);
    GraphRankOracle base(g);
    CHECK_THROWS_AS(recover(base, 1), PreconditionError);
    // two disjoint bases only: exchange fails
    std::map<VertexSet, int> o;
    VertexSet all = low_bits(5);
    for_each_k_subset(all, 2, [&](VertexSet s) { o[all & ~s] = (s == 0b00011 || s == 0b11000) ? 3 : 2; });
    CHECK_THROWS_AS(recover(TamperedOracle(base, o), 2), Infeasible);
    RecoverOptions noisy;
    noisy.mode = RecoverMode::noisy;
    noisy.traverse = false;
    auto r = recover(TamperedOracle(base, o), 2, noisy);
    CHECK(is_transversal_family(5, r.latent_bases));
}

TEST_CASE("repair leaves consistent scores alone") {
    auto g = fixtures::two_latent(1);
    Family truth = RankTable::of_presentation(g.support_matrix(), g.latent()).bases();
    std::map<VertexSet, double> scores;
    for_each_k_subset(g.all(), 2, [&](VertexSet s) { scores[s] = std::count(truth.begin(), truth.end(), s) ? 1.0 : 0.0; });
    auto r = repair_noisy_families(scores, 5, 2);
    CHECK(r.bases == truth);
    CHECK_FALSE(r.changed);
}

TEST_CASE("repair undoes a flip that breaks exchange") {
    // bases {12, 13, 23} on four elements (element 4 a loop); claiming {14} breaks exchange
    Family truth = family_from_lists({{1, 2}, {1, 3}, {2, 3}});
    for (auto& s : truth) s >>= 1;
    std::map<VertexSet, double> scores;
    for_each_k_subset(low_bits(4), 2, [&](VertexSet s) { scores[s] = std::count(truth.begin(), truth.end(), s) ? 0.97 : 0.03; });
    scores[0b1001] = 0.9;
    auto r = repair_noisy_families(scores, 4, 2);
    CHECK(r.bases == sorted_family(truth));
    CHECK(r.changed);
}

TEST_CASE("repair always returns a transversal family and never loses to thresholding") {
    std::mt19937_64 rng(74);
    for (int t = 0; t < 100; ++t) {
        int n = 3 + t % 4;
        int l = 1 + t % 2;
        auto g = random_irreducible(rng, n, std::min(l, (n - 1) / 2), 0.4);
        Family truth = RankTable::of_presentation(g.support_matrix(), g.latent()).bases();
        std::map<VertexSet, double> scores;
        for_each_k_subset(g.all(), g.num_latent(), [&](VertexSet s) {
            scores[s] = truncated_normal(rng, std::count(truth.begin(), truth.end(), s) ? 0.75 : 0.25);
        });
        auto r = repair_noisy_families(scores, n, g.num_latent());
        CHECK(is_transversal_family(n, r.bases));
        CHECK(r.agreement == doctest::Approx(family_agreement(scores, r.bases)));
        Family th;
        for (const auto& [s, c] : scores)
            if (c > 0.5) th.push_back(s);
        if (!th.empty() && is_transversal_family(n, sorted_family(th))) CHECK(r.agreement >= family_agreement(scores, th) - 1e-9);
    }
}

TEST_CASE("larger reconstructions stay fast") {
    std::mt19937_64 rng(75);
    for (int l : {1, 3}) {
        auto g = random_irreducible(rng, 10, l, 3.0 / 9.0);
        auto t0 = std::chrono::steady_clock::now();
        auto r = recover(GraphRankOracle(g, shuffled(rng, 10)), l, no_traversal());
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        CHECK(check_equivalent(g, r.seed).equivalent);
        CHECK(secs < 10.0);
    }
}
