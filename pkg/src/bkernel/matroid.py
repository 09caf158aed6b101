"""Linear matroids over a prime field: gammoids, truncation, representative sets.

All arithmetic is on Python integers modulo a prime ``p``.  The default
prime is 2**61 - 1; the environment variable ``BK_FIELD_PRIME`` overrides
it.  Randomness comes only from ``numpy.random.default_rng(seed)``, so a
representation is a pure function of its inputs and seed.
"""
from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import ParameterError, PreconditionError
from .graph import Graph

log = logging.getLogger(__name__)

MERSENNE_61 = (1 << 61) - 1

Matrix = tuple[tuple[int, ...], ...]


def field_prime() -> int:
    env = os.environ.get("BK_FIELD_PRIME")
    if env:
        p = int(env)
        if p < 2:
            raise ParameterError("BK_FIELD_PRIME must be a prime >= 2")
        return p
    return MERSENNE_61


def _rand_nonzero(rng: np.random.Generator, p: int) -> int:
    # numpy integers top out at 2**63; draw two halves for larger primes
    if p <= (1 << 62):
        return int(rng.integers(1, p))
    while True:
        x = (int(rng.integers(0, 1 << 62)) << 62 | int(rng.integers(0, 1 << 62))) % p
        if x:
            return x


def _rand_element(rng: np.random.Generator, p: int) -> int:
    if p <= (1 << 62):
        return int(rng.integers(0, p))
    return (int(rng.integers(0, 1 << 62)) << 62 | int(rng.integers(0, 1 << 62))) % p


def _echelon(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def field_rank(m: Sequence[Sequence[int]], p: int | None = None) -> int:
    """Rank of a matrix over GF(p)."""
    p = field_prime() if p is None else p
    rows = [[x % p for x in row] for row in m]
    if not rows or not rows[0]:
        return 0
    return len(_echelon(rows, p)[1])


def _inverse(m: list[list[int]], p: int) -> list[list[int]] | None:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, piv = _echelon(aug, p)
    if piv[:n] != list(range(n)) or len(red) < n:
        return None
    return [row[n:] for row in red]


def _matmul(a: list[list[int]], b: list[list[int]], p: int) -> list[list[int]]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]


@dataclass(frozen=True)
class LinearMatroidRep:
    """Column-indexed matrix over GF(p); column j represents ``ground[j]``."""

    matrix: Matrix
    ground: tuple[Hashable, ...]
    p: int = MERSENNE_61
    seed: int | None = None

    def __post_init__(self) -> None:
        if len(set(self.ground)) != len(self.ground):
            raise PreconditionError("ground elements must be distinct")
        for row in self.matrix:
            if len(row) != len(self.ground):
                raise PreconditionError("every row needs one entry per ground element")

    @cached_property
    def _col_index(self) -> dict[Hashable, int]:
        return {e: j for j, e in enumerate(self.ground)}

    @property
    def rows(self) -> int:
        return len(self.matrix)

    @cached_property
    def rank(self) -> int:
        return field_rank(self.matrix, self.p)

    def column(self, e: Hashable) -> list[int]:
        j = self._col_index[e]
        return [row[j] for row in self.matrix]

    def rank_of(self, elems: Iterable[Hashable]) -> int:
        cols = [self.column(e) for e in elems]
        if not cols:
            return 0
        return field_rank(cols, self.p)

    def is_independent(self, elems: Iterable[Hashable]) -> bool:
        es = list(elems)
        if len(set(es)) != len(es):
            return False
        return self.rank_of(es) == len(es)


@dataclass(frozen=True)
class SetFamily:
    sets: tuple[frozenset, ...]
    s: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "sets", tuple(frozenset(x) for x in self.sets))
        for x in self.sets:
            if len(x) != self.s:
                raise PreconditionError(f"set {sorted(x)} does not have size {self.s}")

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def gammoid_representation(
    d: Graph,
    sources: Iterable[int],
    seed: int,
    p: int | None = None,
    max_attempts: int = 64,
) -> LinearMatroidRep:
    """Random representation of the strict gammoid of ``d`` with the given sources.

    A set U is independent iff it is linked from ``sources``.  Undirected
    edges count in both directions.  The construction represents the
    transversal matroid whose row for each non-source w allows {w} and the
    in-neighbours of w, brings it to standard form, and dualises.  The
    result is wrong with probability at most |V|^2 2^|V| / p.
    """
    p = field_prime() if p is None else p
    src = sorted(set(sources))
    if not set(src) <= d.vertices:
        raise PreconditionError("sources must be vertices of d")
    ground = tuple(d.sorted_vertices())
    col = {v: j for j, v in enumerate(ground)}
    others = [v for v in ground if v not in set(src)]
    rng = np.random.default_rng(seed)
    if not others:
        ident = tuple(tuple(int(i == j) for j in range(len(ground))) for i in range(len(ground)))
        return LinearMatroidRep(ident, ground, p, seed)
    for _ in range(max_attempts):
        m = [[0] * len(ground) for _ in others]
        for i, w in enumerate(others):
            m[i][col[w]] = _rand_nonzero(rng, p)
            for u in sorted(d.in_neighbors(w)):
                m[i][col[u]] = _rand_nonzero(rng, p)
        mw = [[row[col[w]] for w in others] for row in m]
        inv = _inverse(mw, p)
        if inv is None:
            continue
        ms = [[row[col[s]] for s in src] for row in m]
        a = _matmul(inv, ms, p)  # |others| x |src|
        out = [[0] * len(ground) for _ in src]
        for i, s in enumerate(src):
            out[i][col[s]] = 1
            for k, w in enumerate(others):
                out[i][col[w]] = (-a[k][i]) % p
        return LinearMatroidRep(tuple(tuple(r) for r in out), ground, p, seed)
    raise ParameterError("could not draw a nonsingular transversal matrix; field too small?")


def gammoid_failure_bound(n_vertices: int, p: int | None = None) -> float:
    p = field_prime() if p is None else p
    return min(1.0, n_vertices**2 * 2.0**n_vertices / p)


def add_sink_copies(g: Graph, copy_of: Iterable[int], copies_per_vertex: int) -> tuple[Graph, dict[int, tuple[int, ...]]]:
    """Attach sink-only copies: each copy of v gets an arc from every in-neighbour of v.

    Copy IDs are fresh, assigned in ascending order of v and copy index.
    """
    targets = sorted(set(copy_of))
    if not set(targets) <= g.vertices:
        raise PreconditionError("copy_of must be a vertex subset")
    out, ids = g.fresh(len(targets) * copies_per_vertex)
    copy_map: dict[int, tuple[int, ...]] = {}
    arcs = []
    it = iter(ids)
    for v in targets:
        cs = tuple(next(it) for _ in range(copies_per_vertex))
        copy_map[v] = cs
        for u in sorted(g.in_neighbors(v)):
            arcs.extend((u, c) for c in cs)
    return out.add_arcs(arcs), copy_map


def truncate(rep: LinearMatroidRep, r: int, seed: int) -> LinearMatroidRep:
    """Multiply by a random r x rows matrix; keeps independence of sets of size <= r w.h.p."""
    if r > rep.rows:
        raise ParameterError(f"cannot truncate {rep.rows} rows to {r}")
    if r == rep.rows:
        return rep
    rng = np.random.default_rng(seed)
    proj = [[_rand_element(rng, rep.p) for _ in range(rep.rows)] for _ in range(r)]
    mat = _matmul(proj, [list(row) for row in rep.matrix], rep.p) if rep.rows else [[0] * len(rep.ground) for _ in range(r)]
    return LinearMatroidRep(tuple(tuple(row) for row in mat), rep.ground, rep.p, seed)


def _det(m: list[list[int]], p: int) -> int:
    n = len(m)
    if n == 1:
        return m[0][0] % p
    if n == 2:
        return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p
    if n == 3:
        a, b, c = m
        return (
            a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0])
        ) % p
    mm = [list(r) for r in m]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if mm[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            mm[c], mm[piv] = mm[piv], mm[c]
            det = -det
        det = det * mm[c][c] % p
        inv = pow(mm[c][c], p - 2, p)
        for i in range(c + 1, n):
            f = mm[i][c] * inv % p
            if f:
                mm[i] = [(x - f * y) % p for x, y in zip(mm[i], mm[c])]
    return det % p


def wedge_vector(cols: list[list[int]], p: int) -> list[int]:
    """Coordinates of c_1 ^ ... ^ c_s: all s x s minors, rows in lexicographic order."""
    k = len(cols[0])
    s = len(cols)
    if s == 1:
        return [x % p for x in cols[0]]
    out = []
    for rows in combinations(range(k), s):
        out.append(_det([[cols[j][i] for j in range(s)] for i in rows], p))
    return out


class _IncrementalBasis:
    """Greedy row basis kept in reduced form for fast membership tests."""

    def __init__(self, p: int):
        self.p = p
        self.rows: list[tuple[int, list[int]]] = []  # (pivot, normalised row)

    def try_add(self, vec: list[int]) -> bool:
        p = self.p
        v = list(vec)
        for piv, row in self.rows:
            f = v[piv]
            if f:
                v = [(a - f * b) % p for a, b in zip(v, row)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = pow(v[piv], p - 2, p)
        v = [(x * inv) % p for x in v]
        # keep earlier rows reduced at the new pivot
        self.rows = [(pv, [(a - r[piv] * b) % p for a, b in zip(r, v)] if r[piv] else r) for pv, r in self.rows]
        self.rows.append((piv, v))
        return True


def representative_family(
    rep: LinearMatroidRep,
    fam: SetFamily,
    q: int,
    seed: int | None = None,
) -> SetFamily:
    """A q-representative subfamily of ``fam`` with at most C(q+s, s) members.

    Dependent members are dropped (logged).  The representation is
    truncated to rank q+s first when it has more rows; a
    :class:`ParameterError` is raised when its rank is below q+s.
    """
    s = fam.s
    if q < 0:
        raise ParameterError("q must be non-negative")
    indep = []
    dropped = 0
    for x in fam.sets:
        if rep.is_independent(sorted(x, key=_sort_key)):
            indep.append(x)
        else:
            dropped += 1
    if dropped:
        log.info("representative_family: dropped %d dependent set(s) of %d", dropped, len(fam.sets))
    if not indep:
        return SetFamily((), s)
    target = q + s
    if rep.rank < target:
        raise ParameterError(f"rank {rep.rank} is below q + s = {target}")
    if rep.rows != target:
        rep = truncate(rep, target, seed if seed is not None else (rep.seed or 0) + 1)
    basis = _IncrementalBasis(rep.p)
    chosen = []
    for x in indep:
        cols = [rep.column(e) for e in sorted(x, key=_sort_key)]
        if basis.try_add(wedge_vector(cols, rep.p)):
            chosen.append(x)
            if len(chosen) == math.comb(target, s):
                break
    return SetFamily(tuple(chosen), s)


def _sort_key(e):
    return (str(type(e)), e)
