#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "lvequiv/errors.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/mixing.hpp"
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

// Total effects by summing weighted directed walks, valid for acyclic graphs.
Eigen::MatrixXd walk_sum(const WeightedModel& m) {
    int n = m.graph.size();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n), term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < n; ++k) {
        term = m.weights * term;
        acc += term;
    }
    return acc;
}

}  // namespace

TEST_CASE("edgeless and single-edge mixings") {
    auto g = fixtures::make({"L1", "X1", "X2"}, {"L1"}, {});
    auto m = sample_weights(g, 3);
    CHECK(m.weights.isZero());
    auto a = mixing(m);
    CHECK(a.values.rows() == 2);
    CHECK(a.values.isApprox(Eigen::MatrixXd::Identity(3, 3).bottomRows(2)));

    auto h = fixtures::make({"L1", "X1"}, {"L1"}, {{"L1", "X1"}});
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    b(1, 0) = 1.75;
    auto ah = mixing(weighted_model(h, b));
    CHECK(ah.values(0, 0) == doctest::Approx(1.75));
    CHECK(ah.values(0, 1) == doctest::Approx(1.0));
    b(0, 1) = 0.5;
    CHECK_THROWS_AS(weighted_model(h, b), PreconditionError);
}

TEST_CASE("weights are reproducible and in range") {
    std::mt19937_64 rng(50);
    for (int t = 0; t < 1000; ++t) {
        auto g = oracle::random_digraph(rng, 2 + t % 7, t % 3, 0.4);
        auto m = sample_weights(g, 900 + t);
        for (const auto& e : g.edges()) {
            double w = std::abs(m.weights(e.head, e.tail));
            CHECK(w >= 0.5);
            CHECK(w <= 2.5);
        }
        CHECK(std::count_if(m.weights.data(), m.weights.data() + m.weights.size(), [](double v) { return v != 0; }) ==
              g.num_edges());
        if (t % 50 == 0) CHECK(sample_weights(g, 900 + t).weights == m.weights);
    }
}

TEST_CASE("acyclic mixing equals the sum over directed walks") {
    std::mt19937_64 rng(51);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        auto g = oracle::random_digraph(rng, 3 + t % 5, 1, 0.35);
        if (!g.is_acyclic()) continue;
        auto m = sample_weights(g, t);
        auto a = mixing(m);
        Eigen::MatrixXd full = walk_sum(m);
        std::vector<int> obs = bits_of(g.observed());
        for (size_t r = 0; r < obs.size(); ++r) CHECK(a.values.row(r).isApprox(full.row(obs[r]), 1e-9));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("bottleneck block has rank two") {
    auto g = fixtures::bottleneck(4, 4, {"C1", "C2"});
    auto a = mixing(sample_weights(g, 7));
    VertexSet z = 0, y = 0;
    for (int k = 1; k <= 4; ++k) {
        z |= bit(static_cast<int>(std::find(a.row_labels.begin(), a.row_labels.end(), "Z" + std::to_string(k)) - a.row_labels.begin()));
        y |= bit(g.index_of("Y" + std::to_string(k)));
    }
    CHECK(numeric_rank(submatrix(a.values, z, y)) == 2);
}

TEST_CASE("numeric rank and confidence") {
    CHECK(numeric_rank(Eigen::MatrixXd::Identity(3, 3), 1e-9) == 3);
    Eigen::VectorXd u(3), v(4);
    u << 1, 2, 3;
    v << 1, -1, 0.5, 2;
    CHECK(numeric_rank(u * v.transpose()) == 1);
    CHECK(numeric_rank(Eigen::MatrixXd(0, 0)) == 0);
    CHECK(confidence_from_sigma(0.02) == doctest::Approx(0.5));
    CHECK(std::abs(confidence_from_sigma(1.0) - 1.0) < 1e-9);
    CHECK(confidence_from_sigma(0.0) == doctest::Approx(1.0 / (1.0 + std::exp(0.5))));
    CHECK(confidence_from_sigma(0.0) == doctest::Approx(0.3775).epsilon(1e-3));
    CHECK(fullrank_confidence(Eigen::MatrixXd::Identity(2, 3)) > 0.999);
}

TEST_CASE("generic numeric ranks match path ranks") {
    std::mt19937_64 rng(52);
    int pairs = 0, mismatches = 0;
    for (int t = 0; t < 500; ++t) {
        int n = 3 + t % 6;
        auto g = random_irreducible(rng, n, std::min(t % 3, (n - 1) / 2), 0.35);
        auto a = mixing(sample_weights(g, 5000 + t));
        std::vector<int> obs = bits_of(g.observed());
        for (int k = 0; k < 50; ++k) {
            VertexSet zr = oracle::random_subset(rng, a.rows());
            VertexSet y = oracle::random_subset(rng, n);
            VertexSet z = 0;
            for_each_bit(zr, [&](int r) { z |= bit(obs[r]); });
            int expected = path_rank(g, {z, y});
            int got = numeric_rank(submatrix(a.values, zr, y));
            ++pairs;
            if (got != expected) {
                ++mismatches;
                // only near-degenerate blocks may disagree
                CHECK(fullrank_confidence(submatrix(a.values, zr, y)) < 0.95);
            }
            // duality bridge on the unscrambled columns
            VertexSet all = g.all();
            CHECK(expected == popcount(z) + popcount(y) - g.size() + edge_rank(g, {all & ~y, all & ~z}));
        }
    }
    CHECK(mismatches * 1000 < pairs);
}

TEST_CASE("scrambling keeps ranks and drops labels") {
    auto g = fixtures::one_latent(1);
    auto a = mixing(sample_weights(g, 1));
    Scrambling id{{0, 1, 2, 3}, {1, 1, 1, 1}};
    auto same = scramble(a, id);
    CHECK(same.values == a.values);
    CHECK_FALSE(same.anonymous());
    auto s = random_scrambling(a.cols(), 99);
    auto b = scramble(a, s);
    CHECK(b.anonymous());
    for (double v : s.scales) {
        CHECK(std::abs(v) >= 0.2);
        CHECK(std::abs(v) <= 5.0);
    }
    for (VertexSet zr = 1; zr < bit(a.rows()); ++zr)
        for (VertexSet y = 1; y < bit(a.cols()); ++y) {
            VertexSet yp = 0;
            for_each_bit(y, [&](int c) { yp |= bit(s.perm[c]); });
            CHECK(numeric_rank(submatrix(a.values, zr, y)) == numeric_rank(submatrix(b.values, zr, yp)));
        }
    CHECK_THROWS_AS(scramble(a, Scrambling{{0, 0, 1, 2}, {1, 1, 1, 1}}), PreconditionError);
}

TEST_CASE("samples follow the mixing moments") {
    auto g = fixtures::one_latent(1);
    auto m = sample_weights(g, 2);
    CHECK(sample_data(m, 0, 1).rows() == 0);
    int n = 100000;
    Eigen::MatrixXd d = sample_data(m, n, 3);
    Eigen::MatrixXd centered = d.rowwise() - d.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1);
    auto a = mixing(m);
    Eigen::MatrixXd expected = a.values * a.values.transpose() / 12.0;
    CHECK((cov - expected).cwiseAbs().maxCoeff() < 0.05 * expected.cwiseAbs().maxCoeff());
    CHECK(sample_data(m, 10, 4) == sample_data(m, 10, 4));

    auto free_model = sample_weights(fixtures::make({"X1", "X2"}, {}, {}), 1);
    Eigen::MatrixXd e = sample_data(free_model, n, 5);
    double corr = ((e.col(0).array() - e.col(0).mean()) * (e.col(1).array() - e.col(1).mean())).mean() / (1.0 / 12.0);
    CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("mixing csv round trip and errors") {
    auto a = mixing(sample_weights(fixtures::two_latent(1), 4));
    auto text = write_mixing_csv(a);
    CHECK(text.rfind(",L1,L2,X1,X2,X3\n", 0) == 0);
    auto back = parse_mixing_csv(text);
    CHECK(back.values == a.values);
    CHECK(back.row_labels == a.row_labels);
    CHECK(back.column_labels == a.column_labels);
    auto anon = scramble(a, 5);
    auto text2 = write_mixing_csv(anon);
    CHECK(text2.rfind("anon\n", 0) == 0);
    CHECK(parse_mixing_csv(text2).anonymous());
    CHECK(parse_mixing_csv(text2).values == anon.values);
    try {
        parse_mixing_csv("anon\nX1,1.0,2.0\nX2,1.0,abc\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 8);
    }
    CHECK_THROWS_AS(parse_mixing_csv("anon\nX1,1,2\nX2,1\n"), ParseError);
    CHECK_THROWS_AS(parse_mixing_csv(""), ParseError);
}
