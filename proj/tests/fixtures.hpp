#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lvequiv/binary_matrix.hpp"
#include "lvequiv/digraph.hpp"

namespace fixtures {

using lvequiv::Digraph;
using EdgeList = std::vector<std::pair<std::string, std::string>>;

inline Digraph make(std::vector<std::string> vertices, std::vector<std::string> latent, EdgeList edges) {
    return Digraph(vertices, latent, edges);
}

// Two-latent class of six members.
inline Digraph two_latent(int k) {
    std::vector<std::string> v{"L1", "L2", "X1", "X2", "X3"}, l{"L1", "L2"};
    EdgeList g1{{"L1", "X1"}, {"L1", "X2"}, {"L2", "X2"}, {"L2", "X3"}, {"X2", "X3"}};
    EdgeList g4{{"L1", "X1"}, {"L1", "L2"}, {"L2", "X2"}, {"L2", "X3"}, {"X2", "X3"}};
    auto with = [](EdgeList e, std::pair<std::string, std::string> x) { e.push_back(x); return e; };
    auto without = [](EdgeList e, std::pair<std::string, std::string> x) {
        std::erase(e, x);
        return e;
    };
    switch (k) {
        case 1: return make(v, l, g1);
        case 2: return make(v, l, with(g1, {"X2", "L2"}));
        case 3: return make(v, l, without(with(g1, {"X2", "L2"}), {"X2", "X3"}));
        case 4: return make(v, l, g4);
        case 5: return make(v, l, with(g4, {"X2", "L2"}));
        default: return make(v, l, without(with(g4, {"X2", "L2"}), {"X2", "X3"}));
    }
}

// One-latent class of ten members with intersecting cycles.
inline Digraph one_latent(int k) {
    std::vector<std::string> v{"L", "X1", "X2", "X3"}, l{"L"};
    static const std::vector<EdgeList> edges{
        {{"L", "X1"}, {"L", "X3"}, {"X2", "L"}, {"X3", "X1"}, {"X3", "X2"}},
        {{"L", "X1"}, {"L", "X3"}, {"X3", "X1"}, {"X3", "X2"}, {"X2", "X3"}},
        {{"L", "X1"}, {"L", "X2"}, {"X2", "X3"}, {"X3", "L"}, {"X3", "X1"}},
        {{"L", "X1"}, {"L", "X2"}, {"X2", "X3"}, {"X3", "X2"}, {"X3", "X1"}},
        {{"L", "X1"}, {"L", "X3"}, {"X3", "L"}, {"X2", "L"}, {"X3", "X1"}, {"X3", "X2"}},
        {{"L", "X1"}, {"L", "X3"}, {"X3", "L"}, {"X3", "X1"}, {"X3", "X2"}, {"X2", "X3"}},
        {{"L", "X1"}, {"L", "X2"}, {"X2", "X3"}, {"X3", "X2"}, {"X3", "X1"}, {"X3", "L"}},
        {{"L", "X1"}, {"L", "X3"}, {"X3", "L"}, {"X2", "L"}, {"X3", "X2"}},
        {{"L", "X1"}, {"L", "X3"}, {"X3", "L"}, {"X3", "X2"}, {"X2", "X3"}},
        {{"L", "X1"}, {"L", "X2"}, {"X2", "X3"}, {"X3", "X2"}, {"X3", "L"}},
    };
    return make(v, l, edges.at(k - 1));
}

// Sources Y1..Ym feed both of C1, C2, which feed all of Z1..Zn.
inline Digraph bottleneck(int m, int n, std::vector<std::string> latent) {
    std::vector<std::string> v{"C1", "C2"};
    EdgeList e;
    for (int i = 1; i <= m; ++i) {
        std::string y = "Y" + std::to_string(i);
        v.push_back(y);
        e.push_back({y, "C1"});
        e.push_back({y, "C2"});
    }
    for (int i = 1; i <= n; ++i) {
        std::string z = "Z" + std::to_string(i);
        v.push_back(z);
        e.push_back({"C1", z});
        e.push_back({"C2", z});
    }
    return make(v, latent, e);
}

inline Digraph reduce_left() {
    return make({"L1", "L2", "X1", "X2"}, {"L1", "L2"}, {{"L1", "L2"}, {"L1", "X1"}, {"L2", "X2"}});
}
inline Digraph reduce_left_expected() {
    return make({"L1", "X1", "X2"}, {"L1"}, {{"L1", "X1"}, {"L1", "X2"}});
}
inline Digraph reduce_middle() {
    return make({"L1", "L2", "L3", "X1", "X2", "X3"}, {"L1", "L2", "L3"},
                {{"L1", "L2"}, {"L2", "L3"}, {"L1", "L3"}, {"L1", "X1"}, {"L2", "X2"}, {"L3", "X3"}});
}
inline Digraph reduce_middle_expected() {
    return make({"L1", "L2", "X1", "X2", "X3"}, {"L1", "L2"},
                {{"L1", "L2"}, {"L1", "X1"}, {"L2", "X2"}, {"L1", "X3"}, {"L2", "X3"}});
}
inline Digraph reduce_right() {
    return make({"L1", "L2", "X1", "X2"}, {"L1", "L2"},
                {{"L1", "L2"}, {"L2", "L1"}, {"X1", "L1"}, {"X1", "L2"}, {"L1", "X2"}, {"L2", "X2"}});
}
inline Digraph reduce_right_expected() { return make({"X1", "X2"}, {}, {{"X1", "X2"}}); }

// Rows 1..4, columns alpha, beta, gamma.
inline lvequiv::BinaryMatrix example_matrix() {
    lvequiv::BinaryMatrix q(4, 3);
    q.set(0, 1);
    q.set(1, 0);
    q.set(2, 0);
    q.set(2, 1);
    q.set(2, 2);
    q.set(3, 0);
    return q;
}

}  // namespace fixtures
