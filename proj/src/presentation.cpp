#include "lvequiv/equivalence.hpp"
#include "lvequiv/irreducibility.hpp"

namespace lvequiv {

Presentation presentation(const Digraph& g) {
    if (!is_irreducible(g)) throw PreconditionError("presentations need an irreducible model; reduce first");
    if (g.size() > kMaxGround) throw SizeError("presentation is limited to " + std::to_string(kMaxGround) + " vertices");
    BinaryMatrix m = g.support_matrix();
    VertexSet lat = g.latent();
    RankTable latent_table = RankTable::of_presentation(m, lat);

    // latent columns interact, so grow them until nothing changes
    for (bool changed = true; changed;) {
        changed = false;
        for_each_bit(lat, [&](int c) {
            VertexSet d = colaug_maximal(latent_table, RankTable::of_presentation(m, lat & ~bit(c)));
            if (d != m.column(c)) {
                m = m.with_column(c, d);
                changed = true;
            }
        });
    }
    for_each_bit(g.observed(), [&](int x) {
        m = m.with_column(x, colaug_maximal(RankTable::of_presentation(m, lat | bit(x)), latent_table));
    });

    std::vector<VertexSet> children(g.size(), 0);
    for (int i = 0; i < g.size(); ++i) {
        VertexSet col = m.column(i);
        if (!contains(col, i)) throw std::logic_error("maximal column lost its diagonal entry");
        children[i] = col & ~bit(i);
    }
    Presentation p{Digraph::from_children(g.labels(), g.num_latent(), children), {}, {}};

    std::vector<VertexSet> forced(g.size(), 0);
    for_each_bit(lat, [&](int c) {
        forced[c] = colaug_minimal(latent_table, RankTable::of_presentation(m, lat & ~bit(c))).forced;
    });
    for_each_bit(g.observed(), [&](int x) {
        forced[x] = colaug_minimal(RankTable::of_presentation(m, lat | bit(x)), latent_table).forced;
    });
    for (const auto& e : p.base.edges())
        (contains(forced[e.tail], e.head) ? p.solid_edges : p.dashed_edges).push_back(e);
    return p;
}

}  // namespace lvequiv
