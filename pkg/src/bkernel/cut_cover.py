"""Cut covers: small vertex sets that contain a minimum cut for every sub-query.

A *pair* cover for (S, T) contains a minimum (A, B)-vertex cut for every
A subset of S and B subset of T (or for an explicit list of pairs).  A
*partition* cover for (X, s) contains, for every partition of X into
(X_0, X_X, X_1, ..., X_s), a minimum multiway cut of the nonempty X_i in
G - X_X, with terminals deletable.

``mode="oracle"`` enumerates every sub-query and is exact;
``mode="matroid"`` selects vertices through a representative family of a
gammoid and must be checked with :func:`validate_cut_cover`.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, ParameterError, PreconditionError
from .flows import CutQuery, min_vertex_cut
from .graph import Graph, components
from .matroid import SetFamily, add_sink_copies, gammoid_representation, representative_family

log = logging.getLogger(__name__)

PAIR_THRESHOLD = 16
PARTITION_BUDGET = 1 << 18


@dataclass(frozen=True)
class PairQuery:
    s_set: frozenset[int]
    t_set: frozenset[int]
    pairs: tuple[tuple[frozenset[int], frozenset[int]], ...] | None = None

    def sub_queries(self) -> Iterator[tuple[frozenset[int], frozenset[int]]]:
        if self.pairs is not None:
            yield from self.pairs
            return
        for a in _subsets(sorted(self.s_set)):
            for b in _subsets(sorted(self.t_set)):
                yield a, b

    def count(self) -> int:
        if self.pairs is not None:
            return len(self.pairs)
        return 2 ** (len(self.s_set) + len(self.t_set))


@dataclass(frozen=True)
class PartitionQuery:
    x_set: frozenset[int]
    s: int

    def sub_queries(self) -> Iterator[tuple[frozenset[int], tuple[frozenset[int], ...]]]:
        """Yield ``(X_X, (X_1, ..., X_k))`` with at least two nonempty labelled parts.

        Labelled parts are interchangeable, so each is generated once
        (labels appear in order of first use).  Partitions with fewer than
        two labelled parts have an empty minimum cut and are skipped.
        """
        xs = sorted(self.x_set)
        s = self.s

        def rec(i: int, xx: list[int], parts: list[list[int]]):
            if i == len(xs):
                if len(parts) >= 2:
                    yield frozenset(xx), tuple(frozenset(p) for p in parts)
                return
            v = xs[i]
            yield from rec(i + 1, xx, parts)  # X_0
            xx.append(v)
            yield from rec(i + 1, xx, parts)
            xx.pop()
            for p in parts:
                p.append(v)
                yield from rec(i + 1, xx, parts)
                p.pop()
            if len(parts) < s:
                parts.append([v])
                yield from rec(i + 1, xx, parts)
                parts.pop()

        yield from rec(0, [], [])

    def count(self) -> int:
        return (self.s + 2) ** len(self.x_set)


@dataclass(frozen=True)
class CutCover:
    z: frozenset[int]
    query: PairQuery | PartitionQuery
    mode: str
    seed: int | None
    size_bound_claimed: int

    @property
    def kind(self) -> str:
        return "pair" if isinstance(self.query, PairQuery) else "partition"


def _subsets(xs: Sequence[int]) -> Iterator[frozenset[int]]:
    for r in range(len(xs) + 1):
        for c in itertools.combinations(xs, r):
            yield frozenset(c)


# -- exact multiway cut -------------------------------------------------

def _violating_path(g: Graph, parts: Sequence[frozenset[int]], removed: frozenset[int]) -> list[int] | None:
    """Shortest path joining two different parts in g - removed, or None."""
    label: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    queue: deque[int] = deque()
    for i, part in enumerate(parts):
        for v in sorted(part):
            if v in removed:
                continue
            if v in label and label[v] != i:
                return [v]
            if v not in label:
                label[v] = i
                parent[v] = None
                queue.append(v)
    while queue:
        x = queue.popleft()
        for y in sorted(g.neighbors(x)):
            if y in removed:
                continue
            if y not in label:
                label[y] = label[x]
                parent[y] = x
                queue.append(y)
            elif label[y] != label[x]:
                left, right = [], []
                a: int | None = x
                while a is not None:
                    left.append(a)
                    a = parent[a]
                b: int | None = y
                while b is not None:
                    right.append(b)
                    b = parent[b]
                return left[::-1] + right
    return None


def min_multiway_cut(
    g: Graph,
    parts: Sequence[Iterable[int]],
    undeletable: Iterable[int] = (),
) -> tuple[float | int, frozenset[int]]:
    """Minimum vertex set separating every pair of parts; part vertices are deletable.

    Two parts use a max-flow; more use iterative-deepening branch and
    bound over the vertices of a shortest violating path.
    """
    ps = [frozenset(p) & g.vertices for p in parts]
    ps = [p for p in ps if p]
    fixed = frozenset(undeletable)
    if len(ps) < 2:
        return 0, frozenset()
    if len(ps) == 2:
        return min_vertex_cut(CutQuery(g.underlying_undirected() if g.arcs else g, ps[0], ps[1], fixed & g.vertices))
    ug = g.underlying_undirected() if g.arcs else g
    deletable = ug.vertices - fixed
    if _violating_path(ug, ps, deletable) is not None:
        return math.inf, frozenset()

    def search(removed: frozenset[int], budget: int) -> frozenset[int] | None:
        path = _violating_path(ug, ps, removed)
        if path is None:
            return removed
        if budget == 0:
            return None
        for v in path:
            if v in fixed:
                continue
            got = search(removed | {v}, budget - 1)
            if got is not None:
                return got
        return None

    for k in range(len(deletable) + 1):
        sol = search(frozenset(), k)
        if sol is not None:
            return len(sol), sol
    return math.inf, frozenset()


def _trivially_separated(g: Graph, parts: Sequence[frozenset[int]], removed: frozenset[int]) -> bool:
    where = {}
    for comp in components(g, g.vertices - removed):
        for v in comp:
            where[v] = comp
    seen = {}
    for i, p in enumerate(parts):
        for v in p:
            if v in removed:
                continue
            c = id(where[v])
            if c in seen and seen[c] != i:
                return False
            seen[c] = i
    return True


# -- covers -------------------------------------------------------------

def pair_cut_cover(
    g: Graph,
    s_set: Iterable[int],
    t_set: Iterable[int],
    mode: str = "oracle",
    seed: int = 0,
    *,
    pairs: Iterable[tuple[Iterable[int], Iterable[int]]] | None = None,
    q: int | None = None,
    threshold: int = PAIR_THRESHOLD,
) -> CutCover:
    """Cover for all (A, B) with A within s_set and B within t_set, or for ``pairs`` only."""
    S, T = frozenset(s_set), frozenset(t_set)
    if not (S <= g.vertices and T <= g.vertices):
        raise PreconditionError("s_set and t_set must be vertex subsets")
    plist = None if pairs is None else tuple((frozenset(a), frozenset(b)) for a, b in pairs)
    query = PairQuery(S, T, plist)
    r, _ = min_vertex_cut(CutQuery(g, S, T))
    r_fin = 0 if r == math.inf else int(r)
    claimed = max(1, len(S)) * max(1, len(T)) * max(1, r_fin)
    if mode == "oracle":
        if plist is None and len(S) + len(T) > threshold:
            raise BudgetExceeded(f"|S|+|T| = {len(S) + len(T)} exceeds the exhaustion threshold {threshold}")
        z: set[int] = set()
        for a, b in query.sub_queries():
            size, cut = min_vertex_cut(CutQuery(g, a, b))
            if size != math.inf:
                z |= cut
        return CutCover(frozenset(z), query, mode, None, claimed)
    if mode == "matroid":
        if q is None:
            q = len(T) + r_fin + 1
        z = _matroid_select(g.underlying_undirected(), S | T, 2, q, seed)
        return CutCover(frozenset(z | S | T), query, mode, seed, claimed)
    raise ParameterError(f"unknown cover mode {mode!r}")


def partition_cut_cover(
    g: Graph,
    x_set: Iterable[int],
    s: int,
    mode: str = "oracle",
    seed: int = 0,
    *,
    q: int | None = None,
    budget: int = PARTITION_BUDGET,
) -> CutCover:
    """Cover for every partition (X_0, X_X, X_1, ..., X_s) of x_set."""
    X = frozenset(x_set)
    if s < 1:
        raise ParameterError("s must be at least 1")
    if not X <= g.vertices:
        raise PreconditionError("x_set must be a vertex subset")
    query = PartitionQuery(X, s)
    claimed = max(1, len(X)) ** (s + 1)
    if mode == "oracle":
        if query.count() > budget:
            raise BudgetExceeded(f"(s+2)^|X| = {query.count()} exceeds the exhaustion budget {budget}")
        z: set[int] = set()
        memo: dict = {}
        for xx, parts in query.sub_queries():
            key = (xx, frozenset(parts))
            if key in memo:
                continue
            h = g.remove_vertices(xx)
            if _trivially_separated(h, parts, frozenset()):
                memo[key] = frozenset()
                continue
            size, cut = min_multiway_cut(h, parts)
            memo[key] = cut
            if size != math.inf:
                z |= cut
        return CutCover(frozenset(z), query, mode, None, claimed)
    if mode == "matroid":
        if q is None:
            q = len(X)
        z = _matroid_select(g, X, s, q, seed)
        return CutCover(frozenset(z | X), query, mode, seed, claimed)
    raise ParameterError(f"unknown cover mode {mode!r}")


def _matroid_select(g: Graph, sources: frozenset[int], copies: int, q: int, seed: int) -> set[int]:
    """Vertices v whose tuple {v, v', ...} survives a representative-family step."""
    others = sorted(g.vertices - sources)
    if not others:
        return set()
    gs, cmap = add_sink_copies(g, others, copies)
    rep = gammoid_representation(gs, sources, seed)
    width = copies + 1
    fam = SetFamily(tuple(frozenset((v, *cmap[v])) for v in others), width)
    q_eff = min(q, rep.rank - width)
    if q_eff < 0:
        return set()
    kept = representative_family(rep, fam, q_eff, seed=seed + 1)
    return {v for v in others if frozenset((v, *cmap[v])) in set(kept.sets)}


def validate_cut_cover(g: Graph, cover: CutCover) -> bool:
    """True iff every sub-query has a minimum cut inside ``cover.z``."""
    outside = g.vertices - cover.z
    if isinstance(cover.query, PairQuery):
        for a, b in cover.query.sub_queries():
            full, _ = min_vertex_cut(CutQuery(g, a, b))
            restricted, _ = min_vertex_cut(CutQuery(g, a, b, outside))
            if full != restricted:
                return False
        return True
    for xx, parts in cover.query.sub_queries():
        h = g.remove_vertices(xx)
        if _trivially_separated(h, parts, frozenset()):
            continue
        full, _ = min_multiway_cut(h, parts)
        restricted, _ = min_multiway_cut(h, parts, outside & h.vertices)
        if full != restricted:
            return False
    return True
