"""Instance generators used as fixtures by tests and demos."""
from __future__ import annotations

import itertools
from typing import Iterable

from ..graph import AnnotatedBoundariedGraph, BoundariedGraph, Graph
from ..matroid import LinearMatroidRep, SetFamily


def k2i(i: int, x: int = 0, y: int = 1) -> AnnotatedBoundariedGraph:
    """K_{2,i} with parts {x, y} and {2..i+1}, boundary {x, y}, no terminals."""
    if i < 1:
        raise ValueError("i must be at least 1")
    mids = list(range(2, i + 2))
    g = Graph.build([x, y, *mids], [(a, m) for a in (x, y) for m in mids])
    return AnnotatedBoundariedGraph(BoundariedGraph(g, frozenset((x, y))), (("terminals", frozenset()),))


def generate_k2i_family(i_max: int) -> list[AnnotatedBoundariedGraph]:
    """K_{2,i} for i = 1..i_max; each has an empty local solution."""
    return [k2i(i) for i in range(1, i_max + 1)]


def brute_representative_check(rep: LinearMatroidRep, fam: SetFamily, subfam: SetFamily, q: int) -> bool:
    """Exhaustively test that ``subfam`` is q-representative for ``fam``.

    For every X with |X| <= q: if some member Y of fam is disjoint from X
    with X ∪ Y independent, some member of subfam must do the same.
    """
    ground = list(rep.ground)
    members = [frozenset(y) for y in fam.sets]
    sub = [frozenset(y) for y in subfam.sets]
    if not set(sub) <= set(members):
        return False

    def extends(x: frozenset, y: frozenset) -> bool:
        return not (x & y) and rep.is_independent(sorted(x | y))

    for r in range(q + 1):
        for xs in itertools.combinations(ground, r):
            x = frozenset(xs)
            if not rep.is_independent(sorted(x)):
                continue
            if any(extends(x, y) for y in members) and not any(extends(x, y) for y in sub):
                return False
    return True
