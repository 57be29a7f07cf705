#include "lvequiv/glvling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "lvequiv/errors.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/matching.hpp"
#include "lvequiv/parallel.hpp"
#include "lvequiv/ranks.hpp"

namespace lvequiv {

GraphRankOracle::GraphRankOracle(Digraph g, std::vector<int> column_vertex)
    : g_(std::move(g)), observed_(bits_of(g_.observed())), column_vertex_(std::move(column_vertex)) {
    if (column_vertex_.empty())
        for (int v = 0; v < g_.size(); ++v) column_vertex_.push_back(v);
    std::vector<int> sorted = column_vertex_;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < static_cast<int>(sorted.size()); ++k)
        if (sorted[k] != k || static_cast<int>(sorted.size()) != g_.size())
            throw PreconditionError("column map must be a permutation of the vertices");
}

int GraphRankOracle::num_rows() const { return static_cast<int>(observed_.size()); }

std::vector<std::string> GraphRankOracle::row_labels() const { return g_.labels_of(g_.observed()); }

RankAnswer GraphRankOracle::query(VertexSet rows, VertexSet cols) const {
    VertexSet targets = 0, sources = 0;
    for_each_bit(rows, [&](int r) { targets |= bit(observed_.at(r)); });
    for_each_bit(cols, [&](int c) { sources |= bit(column_vertex_.at(c)); });
    int r = path_rank(g_, {targets, sources});
    bool full = r == std::min(popcount(rows), popcount(cols));
    return {r, full ? 1.0 : 0.0, true};
}

MatrixRankOracle::MatrixRankOracle(MixingMatrix a, double tol, ConfidenceParams conf, double clean_gap)
    : a_(std::move(a)), tol_(tol), conf_(conf), clean_gap_(clean_gap) {
    if (a_.cols() > kMaxGround) throw SizeError("mixing matrix has too many columns");
    if (static_cast<int>(a_.row_labels.size()) != a_.rows()) throw PreconditionError("every mixing row needs a label");
}

RankAnswer MatrixRankOracle::query(VertexSet rows, VertexSet cols) const {
    Eigen::VectorXd s = singular_values(submatrix(a_.values, rows, cols));
    RankAnswer out;
    if (s.size() == 0) return out;
    double top = s(0);
    out.rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        double rel = top > 0 ? s(k) / top : 0.0;
        bool counted = rel > tol_ && s(k) > kAbsoluteRankFloor;
        if (counted) ++out.rank;
        if (counted && rel < clean_gap_) out.clean = false;
    }
    out.confidence = confidence_from_sigma(s(s.size() - 1), conf_);
    return out;
}

RankAnswer MemoOracle::query(VertexSet rows, VertexSet cols) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find({rows, cols});
        if (it != cache_.end()) return it->second;
    }
    RankAnswer a = oracle_.query(rows, cols);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(std::make_pair(rows, cols), a);
    return a;
}

std::size_t MemoOracle::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.size();
}

namespace {

double clamp_log(double c) { return std::log(std::clamp(c, 1e-9, 1.0 - 1e-9)); }

// Candidate sets indexed once; families are membership vectors over them.
struct CandidateIndex {
    std::vector<VertexSet> sets;
    std::map<VertexSet, int> index;
    std::vector<double> gain;  // agreement change when a set becomes a member

    CandidateIndex(int ground, int rank, const std::map<VertexSet, double>& scores) {
        for_each_k_subset(low_bits(ground), rank, [&](VertexSet s) {
            index[s] = static_cast<int>(sets.size());
            sets.push_back(s);
            auto it = scores.find(s);
            double c = it == scores.end() ? 0.0 : it->second;
            gain.push_back(clamp_log(c) - clamp_log(1.0 - c));
        });
    }
};

using Membership = std::vector<char>;

Family to_family(const CandidateIndex& ci, const Membership& in) {
    Family f;
    for (size_t k = 0; k < in.size(); ++k)
        if (in[k]) f.push_back(ci.sets[k]);
    return f;
}

struct Violation {
    int b1, b2;
    int x;
    int depth;
};

std::vector<Violation> violations(const CandidateIndex& ci, const Membership& in) {
    std::vector<Violation> out;
    std::vector<int> members;
    for (size_t k = 0; k < in.size(); ++k)
        if (in[k]) members.push_back(static_cast<int>(k));
    for (int a : members)
        for (int b : members) {
            if (a == b) continue;
            VertexSet b1 = ci.sets[a], b2 = ci.sets[b];
            for_each_bit(b1 & ~b2, [&](int x) {
                bool ok = false;
                for_each_bit(b2 & ~b1, [&](int y) { ok = ok || in[ci.index.at((b1 & ~bit(x)) | bit(y))]; });
                if (!ok) out.push_back({a, b, x, popcount(b1 & ~b2)});
            });
        }
    std::stable_sort(out.begin(), out.end(), [](const Violation& p, const Violation& q) { return p.depth > q.depth; });
    return out;
}

double base_agreement(const std::map<VertexSet, double>& scores, const CandidateIndex& ci) {
    double s = 0;
    for (VertexSet v : ci.sets) {
        auto it = scores.find(v);
        s += clamp_log(1.0 - (it == scores.end() ? 0.0 : it->second));
    }
    return s;
}

double agreement_of(const CandidateIndex& ci, double base, const Membership& in) {
    double s = base;
    for (size_t k = 0; k < in.size(); ++k)
        if (in[k]) s += ci.gain[k];
    return s;
}

}  // namespace

double family_agreement(const std::map<VertexSet, double>& scores, const Family& f) {
    std::set<VertexSet> members(f.begin(), f.end());
    double s = 0;
    for (const auto& [set, c] : scores) s += members.count(set) ? clamp_log(c) : clamp_log(1.0 - c);
    return s;
}

bool is_transversal_family(int ground, const Family& bases) {
    try {
        realize_from_bases(ground, bases);
        return true;
    } catch (const NotAMatroid&) {
        return false;
    } catch (const NotTransversal&) {
        return false;
    }
}

RepairResult repair_noisy_families(const std::map<VertexSet, double>& scores, int ground, int rank, int beam_width) {
    if (ground > kMaxGround) throw SizeError("repair is limited to " + std::to_string(kMaxGround) + " elements");
    if (rank < 0 || rank > ground) throw PreconditionError("rank out of range");
    CandidateIndex ci(ground, rank, scores);
    double base = base_agreement(scores, ci);
    const double penalty = 2.0;
    beam_width = std::max(1, beam_width);

    Membership start(ci.sets.size(), 0);
    for (size_t k = 0; k < ci.sets.size(); ++k) start[k] = ci.gain[k] > 0;

    std::map<Membership, bool> valid_cache;
    auto valid = [&](const Membership& in) {
        auto it = valid_cache.find(in);
        if (it != valid_cache.end()) return it->second;
        bool ok = std::count(in.begin(), in.end(), 1) > 0 && violations(ci, in).empty() &&
                  is_transversal_family(ground, to_family(ci, in));
        valid_cache[in] = ok;
        return ok;
    };

    RepairResult out;
    std::optional<Membership> best;
    double best_score = -1e300;
    auto consider = [&](const Membership& in) {
        double a = agreement_of(ci, base, in);
        if (a > best_score && valid(in)) {
            best = in;
            best_score = a;
        }
    };

    // beam over states ranked by agreement minus a penalty per violation
    std::vector<Membership> beam{start};
    std::set<Membership> seen{start};
    consider(start);
    int stale = 0;
    for (int step = 0; step < 64 && !beam.empty() && stale < 6; ++step) {
        std::vector<std::pair<double, Membership>> next;
        for (const auto& state : beam) {
            auto viols = violations(ci, state);
            std::vector<int> flips;
            std::set<int> used;
            auto push = [&](int k) {
                if (used.insert(k).second) flips.push_back(k);
            };
            if (viols.empty()) {
                // not transversal or empty: every single flip is a candidate
                for (size_t k = 0; k < ci.sets.size(); ++k) push(static_cast<int>(k));
            }
            for (const auto& v : viols) {
                push(v.b1);
                push(v.b2);
                VertexSet b1 = ci.sets[v.b1], b2 = ci.sets[v.b2];
                for_each_bit(b2 & ~b1, [&](int y) { push(ci.index.at((b1 & ~bit(v.x)) | bit(y))); });
            }
            for (int k : flips) {
                Membership child = state;
                child[k] ^= 1;
                ++out.expansions;
                if (!seen.insert(child).second) continue;
                double score = agreement_of(ci, base, child) - penalty * static_cast<double>(violations(ci, child).size());
                next.push_back({score, std::move(child)});
            }
        }
        std::stable_sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        beam.clear();
        double before = best_score;
        for (auto& [score, state] : next) {
            if (static_cast<int>(beam.size()) >= beam_width) break;
            consider(state);
            beam.push_back(std::move(state));
        }
        stale = best_score > before ? 0 : stale + 1;
    }

    if (!best) {
        // the uniform matroid is always transversal
        best = Membership(ci.sets.size(), 1);
        best_score = agreement_of(ci, base, *best);
    }
    // hill climb inside the valid region by single flips and member swaps
    const size_t c = ci.sets.size();
    for (bool improved = true; improved;) {
        improved = false;
        for (size_t j = 0; j < c; ++j)
            for (size_t k = j; k < c; ++k) {
                if (j != k && (*best)[j] == (*best)[k]) continue;
                Membership child = *best;
                child[j] ^= 1;
                if (j != k) child[k] ^= 1;
                double a = agreement_of(ci, base, child);
                if (a > best_score + 1e-12 && valid(child)) {
                    best = child;
                    best_score = a;
                    improved = true;
                }
            }
    }
    out.bases = sorted_family(to_family(ci, *best));
    out.agreement = best_score;
    out.changed = *best != start;
    return out;
}

RecoveryResult recover(const RankOracle& oracle, int num_latent, const RecoverOptions& opts) {
    const int m = oracle.num_rows(), n = oracle.num_columns(), l = num_latent;
    if (l < 0 || n != m + l)
        throw PreconditionError("oracle has " + std::to_string(n) + " columns but " + std::to_string(m) + " rows and " +
                                std::to_string(l) + " latents were given");
    if (n > kMaxGround) throw SizeError("recovery is limited to " + std::to_string(kMaxGround) + " vertices");
    std::vector<std::string> observed = oracle.row_labels();
    std::vector<std::string> latent = opts.latent_labels;
    if (latent.empty())
        for (int k = 1; k <= l; ++k) latent.push_back("L" + std::to_string(k));
    if (static_cast<int>(latent.size()) != l) throw PreconditionError("need one label per latent");

    RecoveryResult res;
    auto log = [&](const std::string& s) { res.diagnostics.push_back(s); };
    auto t0 = std::chrono::steady_clock::now();
    MemoOracle memo(oracle);
    const VertexSet rows = low_bits(m), cols = low_bits(n);

    // Phase 1: bases of the latent columns are the l-sets S with A[X, V \ S] of full rank
    std::map<VertexSet, double> scores;
    Family thresholded;
    bool clean = true, ambiguous = false;
    for_each_k_subset(cols, l, [&](VertexSet s) {
        RankAnswer a = memo.query(rows, cols & ~s);
        scores[s] = a.confidence;
        clean = clean && a.clean;
        ambiguous = ambiguous || (a.confidence > opts.noisy_low && a.confidence < opts.noisy_high);
        if (a.rank == m) thresholded.push_back(s);
    });
    res.noisy = opts.mode == RecoverMode::noisy || (opts.mode == RecoverMode::automatic && !clean);
    if (res.noisy) {
        thresholded.clear();
        for (const auto& [s, c] : scores)
            if (c > 0.5) thresholded.push_back(s);
    }
    sort_family(thresholded);
    log("phase1 candidates " + std::to_string(scores.size()) + " bases " + std::to_string(thresholded.size()) +
        (res.noisy ? " mode noisy" : " mode exact"));

    Family family = thresholded;
    bool valid = !family.empty() && is_transversal_family(n, family);
    if (res.noisy && (ambiguous || !valid)) {
        RepairResult rep = repair_noisy_families(scores, n, l, opts.beam_width);
        family = rep.bases;
        res.repaired = rep.changed;
        res.agreement = rep.agreement;
        log("phase1 repair (heuristic) expansions " + std::to_string(rep.expansions) + " changed " +
            (rep.changed ? "yes" : "no") + " agreement " + std::to_string(rep.agreement));
        valid = true;
    } else {
        res.agreement = family_agreement(scores, family);
    }
    if (!valid) throw Infeasible("latent column ranks do not form a transversal matroid; the oracle is inconsistent");
    res.latent_bases = family;

    BinaryMatrix h_latent = l == 0 ? BinaryMatrix(n, 0) : realize_from_bases(n, family);
    if (h_latent.cols() != l) throw Infeasible("realized latent presentation has the wrong number of columns");
    RankTable without = RankTable::of_bases(n, family);
    log("phase1 realized " + std::to_string(l) + " latent columns");

    // Phase 2: S is independent with observed column x added iff A[X \ x, V \ S] keeps rank |X| - 1
    std::vector<VertexSet> fill(m, 0);
    int threads = opts.threads > 0 ? opts.threads : thread_count();
    parallel_for(m, threads, [&](int x) {
        std::vector<std::uint8_t> ranks(std::size_t{1} << n, 0);
        VertexSet sub_rows = rows & ~bit(x);
        for (VertexSet s = 1; s <= cols; ++s) {
            int best = 0;
            bool subsets_independent = true;
            for_each_bit(s, [&](int i) {
                best = std::max<int>(best, ranks[s & ~bit(i)]);
                subsets_independent = subsets_independent && ranks[s & ~bit(i)] == popcount(s) - 1;
            });
            ranks[s] = static_cast<std::uint8_t>(best);
            if (subsets_independent && popcount(s) <= l + 1) {
                RankAnswer a = memo.query(sub_rows, cols & ~s);
                bool indep = res.noisy ? a.confidence > 0.5 : a.rank == m - 1;
                if (indep) ranks[s] = static_cast<std::uint8_t>(popcount(s));
            }
        }
        fill[x] = colaug_maximal(RankTable(n, std::move(ranks)), without);
    });
    BinaryMatrix h = h_latent;
    for (int x = 0; x < m; ++x) {
        h = h.append_column(fill[x]);
        log("phase2 column " + observed[x] + " entries " + std::to_string(popcount(fill[x])));
    }
    res.presentation = h;

    // nonzero diagonal: each oracle column is matched to the vertex it represents
    std::vector<VertexSet> adj(n);
    for (int t = 0; t < n; ++t) adj[t] = h.row(t);
    std::vector<int> match;
    if (max_matching(adj, &match) != n) throw Infeasible("no row permutation puts ones on the whole diagonal");
    std::vector<std::string> names = latent;
    names.insert(names.end(), observed.begin(), observed.end());
    std::vector<std::pair<std::string, std::string>> edges;
    for (int t = 0; t < n; ++t)
        for_each_bit(h.row(t) & ~bit(match[t]), [&](int c) { edges.push_back({names[c], names[match[t]]}); });
    res.seed = Digraph(names, latent, edges);
    res.column_vertex.resize(n);
    for (int t = 0; t < n; ++t) res.column_vertex[t] = res.seed.index_of(names[match[t]]);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log("reconstruction queries " + std::to_string(memo.size()) + " seconds " + std::to_string(secs));

    if (!is_irreducible(res.seed)) {
        log("seed is not irreducible; class traversal skipped");
        if (!res.noisy) throw Infeasible("reconstructed graph is not irreducible; the oracle is inconsistent");
        return res;
    }
    if (opts.traverse) {
        try {
            res.equivalence_class = traverse_class(res.seed, opts.budget);
            log("class members " + std::to_string(res.equivalence_class->members.size()));
        } catch (const BudgetExceeded& e) {
            res.equivalence_class = e.partial();
            log("class traversal stopped at budget with " + std::to_string(e.partial().members.size()) + " members");
        }
    }
    return res;
}

RecoveryResult recover_from_mixing(const MixingMatrix& a, int num_latent, double tol, ConfidenceParams conf,
                                   const RecoverOptions& opts) {
    MatrixRankOracle oracle(a, tol, conf);
    return recover(oracle, num_latent, opts);
}

}  // namespace lvequiv
