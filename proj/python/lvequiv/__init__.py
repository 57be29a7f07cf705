"""Equivalence classes of linear models with latent variables."""

from ._core import (
    Digraph,
    LvequivError,
    ParseError,
    census,
    check_equivalent,
    duality_gap,
    edge_admissibility,
    edge_rank,
    endpoints,
    equivalence_class,
    handle,
    is_irreducible,
    mixing,
    path_rank,
    presentation,
    recover,
    reduce,
)

__all__ = [
    "Digraph",
    "LvequivError",
    "ParseError",
    "census",
    "check_equivalent",
    "duality_gap",
    "edge_admissibility",
    "edge_rank",
    "endpoints",
    "equivalence_class",
    "handle",
    "is_irreducible",
    "mixing",
    "path_rank",
    "presentation",
    "recover",
    "reduce",
]
