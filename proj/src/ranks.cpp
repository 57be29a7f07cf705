#include "lvequiv/ranks.hpp"

#include <algorithm>

#include "lvequiv/matching.hpp"

namespace lvequiv {

namespace {

void check_sets(const Digraph& g, const RankQuery& q) {
    if ((q.targets | q.sources) & ~g.all()) throw InvalidVertex("rank query names a vertex outside the graph");
}

// Unit vertex capacities through vertex splitting: node 2v is v_in, 2v+1 is v_out.
class SplitFlow {
public:
    SplitFlow(const Digraph& g, const RankQuery& q) : n_(g.size()) {
        int nodes = 2 * n_ + 2;
        source_ = 2 * n_;
        sink_ = 2 * n_ + 1;
        head_.assign(nodes, -1);
        int inf = n_ + 1;
        for (int v = 0; v < n_; ++v) {
            add_arc(2 * v, 2 * v + 1, 1);
            for_each_bit(g.children(v), [&](int w) { add_arc(2 * v + 1, 2 * w, inf); });
        }
        for_each_bit(q.sources, [&](int v) { add_arc(source_, 2 * v, inf); });
        for_each_bit(q.targets, [&](int v) { add_arc(2 * v + 1, sink_, inf); });
    }

    int run() {
        int flow = 0;
        std::vector<int> via(head_.size());
        while (true) {
            std::fill(via.begin(), via.end(), -1);
            std::vector<int> queue{source_};
            std::vector<bool> seen(head_.size(), false);
            seen[source_] = true;
            for (size_t h = 0; h < queue.size() && !seen[sink_]; ++h) {
                int u = queue[h];
                for (int a = head_[u]; a >= 0; a = next_[a]) {
                    int w = to_[a];
                    if (cap_[a] > 0 && !seen[w]) {
                        seen[w] = true;
                        via[w] = a;
                        queue.push_back(w);
                    }
                }
            }
            if (!seen[sink_]) break;
            for (int w = sink_; w != source_; w = to_[via[w] ^ 1]) {
                cap_[via[w]] -= 1;
                cap_[via[w] ^ 1] += 1;
            }
            ++flow;
        }
        return flow;
    }

    std::vector<bool> residual_reach() const {
        std::vector<bool> seen(head_.size(), false);
        std::vector<int> queue{source_};
        seen[source_] = true;
        for (size_t h = 0; h < queue.size(); ++h) {
            int u = queue[h];
            for (int a = head_[u]; a >= 0; a = next_[a])
                if (cap_[a] > 0 && !seen[to_[a]]) {
                    seen[to_[a]] = true;
                    queue.push_back(to_[a]);
                }
        }
        return seen;
    }

private:
    void add_arc(int u, int v, int c) {
        to_.push_back(v);
        cap_.push_back(c);
        next_.push_back(head_[u]);
        head_[u] = static_cast<int>(to_.size()) - 1;
        to_.push_back(u);
        cap_.push_back(0);
        next_.push_back(head_[v]);
        head_[v] = static_cast<int>(to_.size()) - 1;
    }

    int n_;
    int source_ = 0;
    int sink_ = 0;
    std::vector<int> head_, to_, cap_, next_;
};

}  // namespace

int path_rank(const Digraph& g, const RankQuery& q) {
    check_sets(g, q);
    SplitFlow f(g, q);
    return f.run();
}

VertexSet min_vertex_cut(const Digraph& g, const RankQuery& q) {
    check_sets(g, q);
    SplitFlow f(g, q);
    f.run();
    auto reach = f.residual_reach();
    VertexSet cut = 0;
    for (int v = 0; v < g.size(); ++v)
        if (reach[2 * v] && !reach[2 * v + 1]) cut |= bit(v);
    return cut;
}

int edge_rank(const Digraph& g, const RankQuery& q) {
    check_sets(g, q);
    std::vector<VertexSet> adj;
    for_each_bit(q.targets, [&](int z) {
        VertexSet a = (g.parents(z) | bit(z)) & q.sources;
        if (a) adj.push_back(a);
    });
    return adj.empty() ? 0 : max_matching(adj);
}

int matching_rank(const BinaryMatrix& m) { return matching_rank(m, low_bits(m.rows()), low_bits(m.cols())); }

int matching_rank(const BinaryMatrix& m, VertexSet rows, VertexSet cols) {
    return submatrix_matching_rank(m.row_bits(), rows & low_bits(m.rows()), cols & low_bits(m.cols()));
}

int duality_gap(const Digraph& g, const RankQuery& q) {
    int z = popcount(q.targets), y = popcount(q.sources);
    int lhs = std::min(z, y) - path_rank(g, q);
    RankQuery dual{g.all() & ~q.sources, g.all() & ~q.targets};
    int rhs = g.size() - std::max(z, y) - edge_rank(g, dual);
    return lhs - rhs;
}

}  // namespace lvequiv
