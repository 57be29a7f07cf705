#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace lvequiv {

// Sets of vertices (or matrix rows/columns) are bitmasks; graphs are capped at 64 vertices.
using VertexSet = std::uint64_t;

inline constexpr int kMaxVertices = 64;

inline constexpr VertexSet bit(int i) { return VertexSet{1} << i; }

inline constexpr VertexSet low_bits(int n) {
    return n >= 64 ? ~VertexSet{0} : (VertexSet{1} << n) - 1;
}

inline constexpr int popcount(VertexSet s) { return std::popcount(s); }

inline constexpr bool contains(VertexSet s, int i) { return (s >> i) & 1U; }

inline constexpr bool is_subset(VertexSet a, VertexSet b) { return (a & ~b) == 0; }

template <typename F>
inline void for_each_bit(VertexSet s, F&& f) {
    while (s) {
        int i = std::countr_zero(s);
        s &= s - 1;
        f(i);
    }
}

inline std::vector<int> bits_of(VertexSet s) {
    std::vector<int> out;
    out.reserve(popcount(s));
    for_each_bit(s, [&](int i) { out.push_back(i); });
    return out;
}

inline VertexSet mask_of(const std::vector<int>& idx) {
    VertexSet s = 0;
    for (int i : idx) s |= bit(i);
    return s;
}

// Next subset of the same size (Gosper's hack). Returns 0 past the end of `universe_bits`.
inline VertexSet next_same_size(VertexSet s, int universe_bits) {
    if (s == 0) return 0;
    VertexSet c = s & (~s + 1);
    VertexSet r = s + c;
    if (r == 0) return 0;
    VertexSet next = (((r ^ s) >> 2) / c) | r;
    if (universe_bits < 64 && (next >> universe_bits)) return 0;
    return next;
}

// Calls f(subset) for every subset of `universe` with exactly k elements.
template <typename F>
inline void for_each_k_subset(VertexSet universe, int k, F&& f) {
    std::vector<int> idx = bits_of(universe);
    int n = static_cast<int>(idx.size());
    if (k < 0 || k > n) return;
    if (k == 0) {
        f(VertexSet{0});
        return;
    }
    for (VertexSet s = low_bits(k); s; s = next_same_size(s, n)) {
        VertexSet out = 0;
        for_each_bit(s, [&](int i) { out |= bit(idx[i]); });
        f(out);
    }
}

// Labels compare by alphabetic prefix then by numeric suffix, so X2 < X10.
bool natural_less(const std::string& a, const std::string& b);

}  // namespace lvequiv
