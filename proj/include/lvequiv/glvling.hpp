#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lvequiv/binary_matrix.hpp"
#include "lvequiv/equivalence.hpp"
#include "lvequiv/matroid.hpp"
#include "lvequiv/mixing.hpp"

namespace lvequiv {

struct RankAnswer {
    int rank = 0;
    // confidence that the block has full rank min(rows, cols)
    double confidence = 1.0;
    // false when the numeric spectrum has no clear gap at the tolerance
    bool clean = true;
};

// Ranks of blocks of a mixing matrix: rows are observed variables, columns are the (possibly
// anonymous) source columns.
class RankOracle {
public:
    virtual ~RankOracle() = default;
    virtual int num_rows() const = 0;
    virtual int num_columns() const = 0;
    virtual std::vector<std::string> row_labels() const = 0;
    virtual RankAnswer query(VertexSet rows, VertexSet cols) const = 0;
    virtual bool exact() const = 0;
};

// Path ranks of a known graph. Column k of the oracle is vertex column_vertex[k] (identity by
// default), which simulates anonymous columns.
class GraphRankOracle : public RankOracle {
public:
    explicit GraphRankOracle(Digraph g, std::vector<int> column_vertex = {});
    int num_rows() const override;
    int num_columns() const override { return g_.size(); }
    std::vector<std::string> row_labels() const override;
    RankAnswer query(VertexSet rows, VertexSet cols) const override;
    bool exact() const override { return true; }

private:
    Digraph g_;
    std::vector<int> observed_;
    std::vector<int> column_vertex_;
};

// Thresholded singular values of a mixing matrix.
class MatrixRankOracle : public RankOracle {
public:
    MatrixRankOracle(MixingMatrix a, double tol = kDefaultRankTolerance, ConfidenceParams conf = {},
                     double clean_gap = 1e-6);
    int num_rows() const override { return a_.rows(); }
    int num_columns() const override { return a_.cols(); }
    std::vector<std::string> row_labels() const override { return a_.row_labels; }
    RankAnswer query(VertexSet rows, VertexSet cols) const override;
    bool exact() const override { return false; }

private:
    MixingMatrix a_;
    double tol_;
    ConfidenceParams conf_;
    double clean_gap_;
};

enum class RecoverMode { automatic, exact, noisy };

struct RecoverOptions {
    RecoverMode mode = RecoverMode::automatic;
    // in noisy mode, latent families are repaired when a score falls strictly inside this band
    double noisy_low = 0.05;
    double noisy_high = 0.95;
    int beam_width = 4;
    bool traverse = true;
    TraversalBudget budget;
    std::vector<std::string> latent_labels;  // default L1..Lk
    int threads = 0;                         // 0: thread_count()
};

struct RecoveryResult {
    Digraph seed;
    std::optional<EquivalenceClass> equivalence_class;
    Family latent_bases;
    // rows are oracle columns, columns are latents then observed rows of the oracle
    BinaryMatrix presentation;
    std::vector<int> column_vertex;  // oracle column -> seed vertex
    bool noisy = false;
    bool repaired = false;
    double agreement = 0.0;
    std::vector<std::string> diagnostics;
};

// Shared cache in front of an oracle.
class MemoOracle {
public:
    explicit MemoOracle(const RankOracle& o) : oracle_(o) {}
    RankAnswer query(VertexSet rows, VertexSet cols) const;
    std::size_t size() const;

private:
    const RankOracle& oracle_;
    mutable std::map<std::pair<VertexSet, VertexSet>, RankAnswer> cache_;
    mutable std::mutex mu_;
};

struct RepairResult {
    Family bases;
    double agreement = 0.0;
    bool changed = false;
    int expansions = 0;
};

// Sum over candidate sets of log c (member) or log (1 - c) (non-member).
double family_agreement(const std::map<VertexSet, double>& scores, const Family& f);
bool is_transversal_family(int ground, const Family& bases);
// Closest valid transversal basis family to the scores: flips sets involved in exchange
// violations under a bounded beam, then climbs by single flips. Heuristic.
RepairResult repair_noisy_families(const std::map<VertexSet, double>& scores, int ground, int rank, int beam_width = 4);

RecoveryResult recover(const RankOracle& oracle, int num_latent, const RecoverOptions& opts = {});
RecoveryResult recover_from_mixing(const MixingMatrix& a, int num_latent, double tol = kDefaultRankTolerance,
                                   ConfidenceParams conf = {}, const RecoverOptions& opts = {});

}  // namespace lvequiv
