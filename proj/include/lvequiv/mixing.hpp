#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lvequiv/digraph.hpp"

namespace lvequiv {

// B(j, i) is the weight of the edge i -> j.
struct WeightedModel {
    Digraph graph;
    Eigen::MatrixXd weights;
    double condition = 1.0;  // of I - B
};

// Observed rows of (I - B)^-1. Column labels are dropped once columns are scaled or permuted.
struct MixingMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> row_labels;
    std::optional<std::vector<std::string>> column_labels;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
    bool anonymous() const { return !column_labels.has_value(); }
};

struct ConfidenceParams {
    double alpha = 25.0;
    double eps = 0.02;
};

inline constexpr double kDefaultRankTolerance = 1e-9;
// Singular values at or below this are zero whatever the scale; blocks that vanish exactly
// come out of the inverse as roundoff near 1e-17.
inline constexpr double kAbsoluteRankFloor = 1e-12;

// Checks that the support follows the graph and that I - B is invertible.
WeightedModel weighted_model(const Digraph& g, Eigen::MatrixXd weights);
// Edge weights uniform on [-2.5, -0.5] u [0.5, 2.5], redrawn up to 100 times if I - B is singular.
WeightedModel sample_weights(const Digraph& g, std::uint64_t seed);
MixingMatrix mixing(const WeightedModel& m);

// Column permutation and scaling: output column perm[k] is input column k times scales[k].
struct Scrambling {
    std::vector<int> perm;
    std::vector<double> scales;
};
Scrambling random_scrambling(int columns, std::uint64_t seed);
MixingMatrix scramble(const MixingMatrix& a, const Scrambling& s);
MixingMatrix scramble(const MixingMatrix& a, std::uint64_t seed);

Eigen::VectorXd singular_values(const Eigen::MatrixXd& block);
// Singular values above tol times the largest one (and above the absolute floor).
int numeric_rank(const Eigen::MatrixXd& block, double tol = kDefaultRankTolerance);
double confidence_from_sigma(double sigma_min, const ConfidenceParams& p = {});
double fullrank_confidence(const Eigen::MatrixXd& block, const ConfidenceParams& p = {});

// N samples of the observed variables with noise uniform on [-0.5, 0.5]; one row per sample.
Eigen::MatrixXd sample_data(const WeightedModel& m, int n, std::uint64_t seed);

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& a, VertexSet rows, VertexSet cols);

// CSV: header row holds the column labels or the word "anon"; each later row starts with the
// observed label.
std::string write_mixing_csv(const MixingMatrix& a);
MixingMatrix parse_mixing_csv(const std::string& text);
MixingMatrix load_mixing_csv(const std::string& path);
void save_mixing_csv(const MixingMatrix& a, const std::string& path);

}  // namespace lvequiv
