#include "lvequiv/matching.hpp"

#include <array>
#include <limits>

namespace lvequiv {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

struct HopcroftKarp {
    const std::vector<VertexSet>& adj;
    int rows;
    std::vector<int> mr;
    std::array<int, 64> mc;
    std::vector<int> dist;

    explicit HopcroftKarp(const std::vector<VertexSet>& a)
        : adj(a), rows(static_cast<int>(a.size())), mr(rows, -1), dist(rows, kInf) {
        mc.fill(-1);
    }

    bool bfs() {
        std::vector<int> queue;
        queue.reserve(rows);
        for (int r = 0; r < rows; ++r) {
            if (mr[r] < 0) {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = kInf;
            }
        }
        bool found = false;
        for (size_t h = 0; h < queue.size(); ++h) {
            int r = queue[h];
            for_each_bit(adj[r], [&](int c) {
                int r2 = mc[c];
                if (r2 < 0) {
                    found = true;
                } else if (dist[r2] == kInf) {
                    dist[r2] = dist[r] + 1;
                    queue.push_back(r2);
                }
            });
        }
        return found;
    }

    bool dfs(int r) {
        VertexSet cand = adj[r];
        while (cand) {
            int c = std::countr_zero(cand);
            cand &= cand - 1;
            int r2 = mc[c];
            if (r2 < 0 || (dist[r2] == dist[r] + 1 && dfs(r2))) {
                mr[r] = c;
                mc[c] = r;
                return true;
            }
        }
        dist[r] = kInf;
        return false;
    }

    int run() {
        int size = 0;
        // greedy start
        for (int r = 0; r < rows; ++r) {
            VertexSet cand = adj[r];
            while (cand) {
                int c = std::countr_zero(cand);
                cand &= cand - 1;
                if (mc[c] < 0) {
                    mr[r] = c;
                    mc[c] = r;
                    ++size;
                    break;
                }
            }
        }
        while (bfs()) {
            for (int r = 0; r < rows; ++r)
                if (mr[r] < 0 && dfs(r)) ++size;
        }
        return size;
    }
};

}  // namespace

int max_matching(const std::vector<VertexSet>& adj, std::vector<int>* match_of_row) {
    HopcroftKarp hk(adj);
    int size = hk.run();
    if (match_of_row) *match_of_row = hk.mr;
    return size;
}

int submatrix_matching_rank(const std::vector<VertexSet>& rows_bits, VertexSet rows, VertexSet cols) {
    std::vector<VertexSet> adj;
    adj.reserve(popcount(rows));
    for_each_bit(rows, [&](int r) {
        VertexSet a = rows_bits[r] & cols;
        if (a) adj.push_back(a);
    });
    if (adj.empty()) return 0;
    return max_matching(adj);
}

}  // namespace lvequiv
