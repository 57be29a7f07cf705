#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "lvequiv/equivalence.hpp"
#include "lvequiv/irreducibility.hpp"

namespace lvequiv {

EquivalenceClass traverse_class(const Digraph& g, const TraversalBudget& budget) {
    if (!is_irreducible(g)) throw PreconditionError("class traversal needs an irreducible model; reduce first");
    using Key = std::vector<VertexSet>;
    auto start = std::chrono::steady_clock::now();
    const auto& labels = g.labels();
    int l = g.num_latent();

    std::map<Key, int> index;
    std::vector<Key> keys;
    std::deque<int> queue;
    std::set<std::tuple<int, int, int>> links;
    bool complete = true;

    auto visit = [&](const Digraph& h) {
        Key k = canonical_key(h);
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(keys.size());
        index.emplace(k, id);
        keys.push_back(std::move(k));
        queue.push_back(id);
        return id;
    };

    int seed = visit(g);
    std::size_t expanded = 0;
    while (!queue.empty()) {
        if (budget.on_progress && expanded++ % std::max<std::size_t>(1, budget.progress_every) == 0)
            budget.on_progress(keys.size());
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (static_cast<long long>(keys.size()) > budget.max_members || elapsed > budget.max_seconds) {
            complete = false;
            break;
        }
        int id = queue.front();
        queue.pop_front();
        Digraph m = Digraph::from_children(labels, l, keys[id]);
        for (const auto& e : admissible_edits(m)) {
            Digraph h = e.kind == EditKind::add ? m.with_edge(e.tail, e.head) : m.without_edge(e.tail, e.head);
            int other = visit(h);
            if (other == id) continue;
            if (e.kind == EditKind::add) {
                links.insert({id, other, static_cast<int>(TransitionKind::edge_add)});
                links.insert({other, id, static_cast<int>(TransitionKind::edge_delete)});
            } else {
                links.insert({id, other, static_cast<int>(TransitionKind::edge_delete)});
                links.insert({other, id, static_cast<int>(TransitionKind::edge_add)});
            }
        }
        for_each_cycle_cover(m, [&](const std::vector<int>& sigma) {
            int other = visit(apply_row_permutation(m, sigma));
            if (other != id)
                links.insert({std::min(id, other), std::max(id, other), static_cast<int>(TransitionKind::cycle_reversal)});
        });
    }

    std::vector<int> order(keys.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<int> pos(keys.size());
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);

    EquivalenceClass out;
    out.complete = complete;
    out.seed_index = pos[seed];
    for (int id : order) out.members.push_back(Digraph::from_children(labels, l, keys[id]));
    for (const auto& [a, b, k] : links) {
        auto kind = static_cast<TransitionKind>(k);
        int from = pos[a], to = pos[b];
        if (kind == TransitionKind::cycle_reversal && from > to) std::swap(from, to);
        out.transitions.push_back({from, to, kind});
    }
    std::sort(out.transitions.begin(), out.transitions.end(), [](const Transition& x, const Transition& y) {
        return std::tie(x.from_index, x.to_index, x.kind) < std::tie(y.from_index, y.to_index, y.kind);
    });
    if (!complete) throw BudgetExceeded(std::make_shared<EquivalenceClass>(std::move(out)));
    return out;
}

}  // namespace lvequiv
