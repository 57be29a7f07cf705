#include "lvequiv/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include "lvequiv/errors.hpp"
#include "lvequiv/irreducibility.hpp"
#include "lvequiv/parallel.hpp"

namespace lvequiv {

namespace {

int edge_bit(int n, int i, int j) { return i * (n - 1) + (j < i ? j : j - 1); }

std::vector<VertexSet> children_of_code(int n, std::uint64_t code) {
    std::vector<VertexSet> ch(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (code >> edge_bit(n, i, j)) & 1) ch[i] |= bit(j);
    return ch;
}

bool weakly_connected(int n, const std::vector<VertexSet>& ch) {
    std::vector<VertexSet> adj(ch);
    for (int i = 0; i < n; ++i) for_each_bit(ch[i], [&](int j) { adj[j] |= bit(i); });
    VertexSet seen = 1, frontier = 1;
    while (frontier) {
        VertexSet next = 0;
        for_each_bit(frontier, [&](int v) { next |= adj[v]; });
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == low_bits(n);
}

// every nonempty latent subset has at least two children outside itself
bool irreducible_fast(int l, const std::vector<VertexSet>& ch) {
    for (VertexSet s = 1; s < bit(l); ++s) {
        VertexSet out = 0;
        for_each_bit(s, [&](int v) { out |= ch[v]; });
        if (popcount(out & ~s) < 2) return false;
    }
    return true;
}

// For each permutation of the latents, where each edge bit goes.
struct LatentRelabelings {
    std::vector<std::vector<int>> bit_maps;

    LatentRelabelings(int n, int l) {
        for (const auto& perm : all_permutations(l)) {
            std::vector<int> vmap(n);
            std::iota(vmap.begin(), vmap.end(), 0);
            for (int k = 0; k < l; ++k) vmap[k] = perm[k];
            std::vector<int> m(n * (n - 1));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) m[edge_bit(n, i, j)] = edge_bit(n, vmap[i], vmap[j]);
            bit_maps.push_back(std::move(m));
        }
    }

    template <class Fn>
    void for_each_image(std::uint64_t code, Fn&& fn) const {
        for (const auto& m : bit_maps) {
            std::uint64_t out = 0;
            for (std::uint64_t c = code; c; c &= c - 1) out |= std::uint64_t{1} << m[__builtin_ctzll(c)];
            fn(out);
        }
    }

    std::uint64_t least(std::uint64_t code) const {
        std::uint64_t best = code;
        for_each_image(code, [&](std::uint64_t c) { best = std::min(best, c); });
        return best;
    }
};

class AtomicBitmap {
public:
    explicit AtomicBitmap(std::uint64_t bits) : words_((bits + 63) / 64) {}
    bool test(std::uint64_t k) const { return (words_[k / 64].load(std::memory_order_relaxed) >> (k % 64)) & 1; }
    void set(std::uint64_t k) { words_[k / 64].fetch_or(std::uint64_t{1} << (k % 64), std::memory_order_relaxed); }

private:
    std::vector<std::atomic<std::uint64_t>> words_;
};

void check_census_size(int n, int l, bool allow_six) {
    if (n < 1 || l < 0 || l > n) throw PreconditionError("census needs 1 <= n and 0 <= l <= n");
    if (n > 6 || (n == 6 && !allow_six))
        throw SizeError("census is supported up to n = " + std::to_string(kCensusMaxVertices) +
                        " (n = 6 needs the explicit flag)");
}

}  // namespace

Digraph digraph_from_code(int n, int num_latent, std::uint64_t code) {
    if (n < 1 || n > 8) throw PreconditionError("edge codes cover 1..8 vertices");
    if (n * (n - 1) < 64 && code >> (n * (n - 1))) throw PreconditionError("code has bits beyond the edge range");
    return Digraph::from_children(n, num_latent, children_of_code(n, code));
}

std::uint64_t code_of(const Digraph& g) {
    int n = g.size();
    if (n > 8) throw PreconditionError("edge codes cover 1..8 vertices");
    std::uint64_t code = 0;
    for (int i = 0; i < n; ++i) for_each_bit(g.children(i), [&](int j) { code |= std::uint64_t{1} << edge_bit(n, i, j); });
    return code;
}

CensusRow census(int n, int l, const CensusOptions& opts) {
    check_census_size(n, l, opts.allow_six);
    const int edges = n * (n - 1);
    const std::uint64_t total = std::uint64_t{1} << edges;
    const int threads = opts.threads > 0 ? opts.threads : thread_count();
    LatentRelabelings relabel(n, l);

    // pass 1: weak connectivity, irreducibility, latent-canonical representatives
    AtomicBitmap irreducible(total);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, total / 256);
    const int chunks = static_cast<int>((total + chunk - 1) / chunk);
    std::vector<std::uint64_t> wc(chunks, 0), irr(chunks, 0);
    std::vector<std::vector<std::uint64_t>> reps(chunks);
    parallel_for(chunks, threads, [&](int c) {
        std::uint64_t lo = c * chunk, hi = std::min(total, lo + chunk);
        for (std::uint64_t code = lo; code < hi; ++code) {
            auto ch = children_of_code(n, code);
            if (!weakly_connected(n, ch)) continue;
            ++wc[c];
            if (!irreducible_fast(l, ch)) continue;
            ++irr[c];
            irreducible.set(code);
            if (relabel.least(code) == code) reps[c].push_back(code);
        }
    });
    CensusRow row;
    row.n = n;
    row.num_latent = l;
    std::vector<std::uint64_t> canonical;
    for (int c = 0; c < chunks; ++c) {
        row.wc_digraphs += wc[c];
        row.irreducible_with_variants += irr[c];
        canonical.insert(canonical.end(), reps[c].begin(), reps[c].end());
    }
    row.irreducible_unique = canonical.size();

    // pass 2: traverse a class from each representative not yet covered; classes found twice
    // by racing workers are merged on their least member code
    AtomicBitmap covered(total);
    std::mutex mu;
    std::map<std::uint64_t, std::vector<std::uint64_t>> classes;
    std::atomic<std::size_t> next{0};
    TraversalBudget unlimited;
    unlimited.max_members = std::numeric_limits<long long>::max();
    unlimited.max_seconds = 1e9;
    parallel_for(threads, threads, [&](int) {
        for (std::size_t k; (k = next++) < canonical.size();) {
            std::uint64_t code = canonical[k];
            if (covered.test(code)) continue;
            auto cls = traverse_class(digraph_from_code(n, l, code), unlimited);
            std::vector<std::uint64_t> members;
            for (const auto& m : cls.members) {
                std::uint64_t mc = relabel.least(code_of(m));
                members.push_back(mc);
                relabel.for_each_image(mc, [&](std::uint64_t img) { covered.set(img); });
            }
            std::sort(members.begin(), members.end());
            std::lock_guard<std::mutex> lock(mu);
            classes.emplace(members.front(), std::move(members));
        }
    });

    std::uint64_t covered_unique = 0;
    for (const auto& [key, members] : classes) {
        ++row.class_size_histogram[members.size()];
        covered_unique += members.size();
        for (std::uint64_t m : members)
            if (!irreducible.test(m)) throw std::logic_error("class member outside the census population");
    }
    if (covered_unique != row.irreducible_unique) throw std::logic_error("classes do not cover the irreducible graphs exactly");
    row.class_count = classes.size();
    if (opts.classes) {
        opts.classes->clear();
        for (const auto& [key, members] : classes) {
            std::vector<Digraph> gs;
            for (std::uint64_t m : members) gs.push_back(digraph_from_code(n, l, m));
            opts.classes->push_back(std::move(gs));
        }
    }
    return row;
}

std::string format_census_row(const CensusRow& row) {
    std::ostringstream out;
    out << row.n << ' ' << row.num_latent << ' ' << row.wc_digraphs << ' ' << row.irreducible_with_variants << ' '
        << row.irreducible_unique << ' ' << row.class_count << '\n';
    for (const auto& [size, count] : row.class_size_histogram) out << size << ' ' << count << '\n';
    return out.str();
}

std::vector<std::vector<Digraph>> brute_force_partition(int n, int l) {
    if (n < 1 || l < 0 || l > n) throw PreconditionError("need 1 <= n and 0 <= l <= n");
    if (n > kBruteForceMaxVertices) throw SizeError("brute-force partition is limited to n = " + std::to_string(kBruteForceMaxVertices));
    // observed ancestry is shared inside a class, so only graphs agreeing on it are compared
    std::map<std::vector<VertexSet>, std::vector<int>> buckets;
    std::vector<std::vector<Digraph>> classes;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (n * (n - 1))); ++code) {
        auto ch = children_of_code(n, code);
        if (!weakly_connected(n, ch)) continue;
        Digraph g = Digraph::from_children(n, l, ch);
        if (!is_irreducible(g)) continue;
        std::vector<VertexSet> anc;
        for_each_bit(g.observed(), [&](int x) { anc.push_back(g.ancestors(bit(x)) & g.observed()); });
        auto& bucket = buckets[anc];
        bool placed = false;
        for (int c : bucket)
            if (check_equivalent(classes[c].front(), g).equivalent) {
                classes[c].push_back(g);
                placed = true;
                break;
            }
        if (!placed) {
            bucket.push_back(static_cast<int>(classes.size()));
            classes.push_back({g});
        }
    }
    return classes;
}

}  // namespace lvequiv
