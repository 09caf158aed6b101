"""Vertex-stable graphs, boundaried graphs, gluing and bypassing.

Vertices are non-negative integers that never change meaning during a
reduction.  New vertices are drawn from ``next_fresh_id`` so that traces
can be replayed and graphs produced by different rules glue by ID.

A :class:`Graph` stores undirected edges and arcs separately.  Most of the
package works on purely undirected graphs; auxiliary constructions are
directed or mixed.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import ArityError, MissingVertexError, PreconditionError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple loopless graph with undirected edges and arcs.

    ``edges`` holds undirected pairs as sorted tuples, ``arcs`` ordered
    pairs.  ``next_fresh_id`` is excluded from equality: two graphs with
    the same vertices and adjacencies compare equal.
    """

    vertices: frozenset[int] = frozenset()
    edges: frozenset[Edge] = frozenset()
    arcs: frozenset[Edge] = frozenset()
    next_fresh_id: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u >= v:
                raise PreconditionError(f"edge ({u},{v}) is not normalised or is a loop")
            if u not in self.vertices or v not in self.vertices:
                raise PreconditionError(f"edge ({u},{v}) has an endpoint outside the vertex set")
        for u, v in self.arcs:
            if u == v:
                raise PreconditionError(f"arc ({u},{v}) is a loop")
            if u not in self.vertices or v not in self.vertices:
                raise PreconditionError(f"arc ({u},{v}) has an endpoint outside the vertex set")
        if any(v < 0 for v in self.vertices):
            raise PreconditionError("vertex IDs must be non-negative")
        floor = max(self.vertices, default=-1) + 1
        if self.next_fresh_id == -1:
            object.__setattr__(self, "next_fresh_id", floor)
        elif self.next_fresh_id < floor:
            raise PreconditionError("next_fresh_id must exceed every vertex ID")

    # -- construction -------------------------------------------------
    @classmethod
    def build(
        cls,
        vertices: Iterable[int] = (),
        edges: Iterable[Edge] = (),
        arcs: Iterable[Edge] = (),
        next_fresh_id: int = -1,
    ) -> "Graph":
        """Create a graph, adding missing endpoints and normalising edges."""
        vs = set(vertices)
        es = set()
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"loop at {u}")
            es.add(_norm(u, v))
            vs.update((u, v))
        ars = set()
        for u, v in arcs:
            if u == v:
                raise PreconditionError(f"loop at {u}")
            ars.add((u, v))
            vs.update((u, v))
        if next_fresh_id != -1:
            next_fresh_id = max(next_fresh_id, max(vs, default=-1) + 1)
        return cls(frozenset(vs), frozenset(es), frozenset(ars), next_fresh_id)

    def _replace(self, vertices=None, edges=None, arcs=None, next_fresh_id=None) -> "Graph":
        vs = self.vertices if vertices is None else frozenset(vertices)
        nf = self.next_fresh_id if next_fresh_id is None else next_fresh_id
        nf = max(nf, max(vs, default=-1) + 1)
        return Graph(
            vs,
            self.edges if edges is None else frozenset(edges),
            self.arcs if arcs is None else frozenset(arcs),
            nf,
        )

    # -- adjacency ----------------------------------------------------
    @cached_property
    def _und(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    @cached_property
    def _out(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set(self._und[v]) for v in self.vertices}
        for u, v in self.arcs:
            adj[u].add(v)
        return {v: frozenset(s) for v, s in adj.items()}

    @cached_property
    def _in(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set(self._und[v]) for v in self.vertices}
        for u, v in self.arcs:
            adj[v].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    def _check(self, v: int) -> None:
        if v not in self.vertices:
            raise MissingVertexError(v)

    def neighbors(self, v: int) -> frozenset[int]:
        """Undirected neighbours together with arc heads and tails."""
        self._check(v)
        return self._out[v] | self._in[v]

    def out_neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._out[v]

    def in_neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self._in[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and _norm(u, v) in self.edges

    def has_arc(self, u: int, v: int) -> bool:
        """True if one can step from u to v (an arc or an undirected edge)."""
        return (u, v) in self.arcs or self.has_edge(u, v)

    @property
    def is_directed(self) -> bool:
        return bool(self.arcs)

    def __len__(self) -> int:
        return len(self.vertices)

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    # -- editing (all return new graphs) ------------------------------
    def add_vertices(self, vs: Iterable[int]) -> "Graph":
        return self._replace(vertices=self.vertices | frozenset(vs))

    def fresh(self, k: int = 1) -> tuple["Graph", list[int]]:
        """Return ``(graph with k new isolated vertices, their IDs)``."""
        ids = list(range(self.next_fresh_id, self.next_fresh_id + k))
        return self._replace(vertices=self.vertices | frozenset(ids), next_fresh_id=self.next_fresh_id + k), ids

    def add_edges(self, pairs: Iterable[Edge]) -> "Graph":
        es = set(self.edges)
        for u, v in pairs:
            self._check(u)
            self._check(v)
            if u == v:
                raise PreconditionError(f"loop at {u}")
            es.add(_norm(u, v))
        return self._replace(edges=es)

    def add_arcs(self, pairs: Iterable[Edge]) -> "Graph":
        ars = set(self.arcs)
        for u, v in pairs:
            self._check(u)
            self._check(v)
            if u == v:
                raise PreconditionError(f"loop at {u}")
            ars.add((u, v))
        return self._replace(arcs=ars)

    def remove_edges(self, pairs: Iterable[Edge]) -> "Graph":
        drop = {_norm(u, v) for u, v in pairs}
        return self._replace(edges=self.edges - drop)

    def remove_arcs(self, pairs: Iterable[Edge]) -> "Graph":
        return self._replace(arcs=self.arcs - set(pairs))

    def remove_vertices(self, vs: Iterable[int]) -> "Graph":
        drop = frozenset(vs)
        if not drop:
            return self
        return self._replace(
            vertices=self.vertices - drop,
            edges={e for e in self.edges if e[0] not in drop and e[1] not in drop},
            arcs={a for a in self.arcs if a[0] not in drop and a[1] not in drop},
        )

    def induced(self, vs: Iterable[int]) -> "Graph":
        keep = frozenset(vs) & self.vertices
        return self.remove_vertices(self.vertices - keep)

    def isolate(self, v: int) -> "Graph":
        """Drop every edge and arc at v, keeping v itself."""
        self._check(v)
        return self._replace(
            edges={e for e in self.edges if v not in e},
            arcs={a for a in self.arcs if v not in a},
        )

    def as_directed(self) -> "Graph":
        """Replace every undirected edge by two opposite arcs."""
        ars = set(self.arcs)
        for u, v in self.edges:
            ars.add((u, v))
            ars.add((v, u))
        return self._replace(edges=(), arcs=ars)

    def underlying_undirected(self) -> "Graph":
        es = set(self.edges) | {_norm(u, v) for u, v in self.arcs}
        return self._replace(edges=es, arcs=())


@dataclass(frozen=True)
class BoundariedGraph:
    graph: Graph
    boundary: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", frozenset(self.boundary))
        if not self.boundary <= self.graph.vertices:
            raise PreconditionError("boundary must be a subset of the vertex set")

    @property
    def interior(self) -> frozenset[int]:
        return self.graph.vertices - self.boundary


@dataclass(frozen=True)
class AnnotatedBoundariedGraph:
    """A boundaried graph with an ordered tuple of named vertex sets.

    The order of annotations is what gluing matches on; names are kept for
    readability only.
    """

    base: BoundariedGraph
    annotations: tuple[tuple[str, frozenset[int]], ...] = ()

    def __post_init__(self) -> None:
        anns = tuple((str(n), frozenset(s)) for n, s in self.annotations)
        object.__setattr__(self, "annotations", anns)
        for name, s in anns:
            if not s <= self.base.graph.vertices:
                raise PreconditionError(f"annotation {name!r} is not a subset of the vertex set")

    @classmethod
    def of(
        cls,
        graph: Graph,
        boundary: Iterable[int] = (),
        annotations: Iterable[tuple[str, Iterable[int]]] = (),
    ) -> "AnnotatedBoundariedGraph":
        return cls(BoundariedGraph(graph, frozenset(boundary)), tuple((n, frozenset(s)) for n, s in annotations))

    @classmethod
    def with_terminals(cls, graph: Graph, boundary: Iterable[int] = (), terminals: Iterable[int] = ()) -> "AnnotatedBoundariedGraph":
        return cls.of(graph, boundary, [("terminals", terminals)])

    @property
    def graph(self) -> Graph:
        return self.base.graph

    @property
    def boundary(self) -> frozenset[int]:
        return self.base.boundary

    @property
    def arity(self) -> int:
        return len(self.annotations)

    def annotation(self, i: int = 0) -> frozenset[int]:
        return self.annotations[i][1] if i < len(self.annotations) else frozenset()

    @property
    def terminals(self) -> frozenset[int]:
        """First annotation set, or empty if there are none."""
        return self.annotation(0)

    def replace(self, graph: Graph | None = None, boundary=None, annotations=None) -> "AnnotatedBoundariedGraph":
        g = self.graph if graph is None else graph
        b = self.boundary if boundary is None else frozenset(boundary)
        anns = self.annotations if annotations is None else annotations
        # annotations shrink with the vertex set
        anns = tuple((n, frozenset(s) & g.vertices) for n, s in anns)
        return AnnotatedBoundariedGraph(BoundariedGraph(g, b & g.vertices), anns)

    def with_terminal_set(self, terminals: Iterable[int]) -> "AnnotatedBoundariedGraph":
        anns = list(self.annotations) or [("terminals", frozenset())]
        anns[0] = (anns[0][0], frozenset(terminals))
        return self.replace(annotations=tuple(anns))


def glue(g: AnnotatedBoundariedGraph, h: AnnotatedBoundariedGraph) -> AnnotatedBoundariedGraph:
    """Glue two annotated boundaried graphs along their common vertex IDs."""
    shared = g.graph.vertices & h.graph.vertices
    if not shared <= (g.boundary & h.boundary):
        raise PreconditionError(
            f"vertices {sorted(shared - (g.boundary & h.boundary))} are shared outside both boundaries"
        )
    if g.arity != h.arity:
        raise ArityError(f"annotation arity {g.arity} vs {h.arity}")
    graph = Graph(
        g.graph.vertices | h.graph.vertices,
        g.graph.edges | h.graph.edges,
        g.graph.arcs | h.graph.arcs,
        max(g.graph.next_fresh_id, h.graph.next_fresh_id),
    )
    anns = tuple((na, sa | sb) for (na, sa), (_, sb) in zip(g.annotations, h.annotations))
    return AnnotatedBoundariedGraph(BoundariedGraph(graph, g.boundary | h.boundary), anns)


def bypass(g: Graph, v: int) -> Graph:
    """Remove v, adding a shortcut for every 2-path through it.

    A shortcut is undirected when both steps are undirected edges and an arc
    otherwise.  An arc that runs parallel to an undirected edge is dropped
    because the edge already allows that step.
    """
    if v not in g.vertices:
        raise MissingVertexError(v)
    und = g._und[v]
    ins = g._in[v]
    outs = g._out[v]
    new_edges = set(g.edges)
    new_arcs = set(g.arcs)
    for u in und:
        for w in und:
            if u < w:
                new_edges.add((u, w))
    for u in ins:
        for w in outs:
            if u != w and not (u in und and w in und):
                new_arcs.add((u, w))
    h = Graph(g.vertices, frozenset(new_edges), frozenset(new_arcs), g.next_fresh_id).remove_vertices([v])
    return _drop_shadowed_arcs(h)


def _drop_shadowed_arcs(g: Graph) -> Graph:
    if not g.arcs or not g.edges:
        return g
    arcs = {a for a in g.arcs if _norm(*a) not in g.edges}
    if len(arcs) == len(g.arcs):
        return g
    return Graph(g.vertices, g.edges, frozenset(arcs), g.next_fresh_id)


def bypass_set(g: Graph, w: Iterable[int]) -> Graph:
    """Bypass every vertex of w (ascending ID order; the result is order independent)."""
    ws = sorted(set(w))
    for v in ws:
        if v not in g.vertices:
            raise MissingVertexError(v)
    for v in ws:
        g = bypass(g, v)
    return g


def components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Weakly connected components, sorted by smallest vertex."""
    allowed = g.vertices if within is None else frozenset(within) & g.vertices
    seen: set[int] = set()
    out = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y in allowed and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        out.append(frozenset(comp))
    return out


def bipartite_coloring(
    g: Graph,
    within: Iterable[int] | None = None,
    prefer: Mapping[int, int] | None = None,
) -> dict[int, int] | None:
    """Proper 2-colouring of the underlying undirected graph, or None.

    In each component the BFS starts from the smallest vertex that has a
    preferred colour (if any) and otherwise from the smallest vertex, which
    gets colour 0.  Preferences are honoured when they are consistent with
    the start vertex of the component.
    """
    allowed = g.vertices if within is None else frozenset(within) & g.vertices
    prefer = prefer or {}
    color: dict[int, int] = {}
    for comp in components(g, allowed):
        hinted = sorted(v for v in comp if v in prefer)
        start = hinted[0] if hinted else min(comp)
        color[start] = prefer.get(start, 0)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in sorted(g.neighbors(x)):
                if y not in allowed:
                    continue
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def is_bipartite(g: Graph, within: Iterable[int] | None = None) -> bool:
    return bipartite_coloring(g, within) is not None


def parity_reachability(g: Graph, interior: Iterable[int]) -> dict[tuple[int, int], frozenset[int]]:
    """Parities of walks between non-interior vertices through ``interior``.

    Returns a map ``(u, w) -> {parities}`` over ordered pairs of
    non-interior vertices, where parity 1 means an odd walk exists whose
    internal vertices all lie in ``interior``.  A direct edge counts as an
    odd walk; ``u == w`` entries describe closed walks that pass through at
    least one interior vertex.  Works on the underlying undirected graph.
    """
    inner = frozenset(interior)
    if not inner <= g.vertices:
        raise PreconditionError("interior must be a subset of the vertex set")
    result: dict[tuple[int, int], set[int]] = {}
    for u in sorted(g.vertices - inner):
        seen = set()
        queue: deque[tuple[int, int]] = deque()
        for y in g.neighbors(u):
            if y in inner:
                if (y, 1) not in seen:
                    seen.add((y, 1))
                    queue.append((y, 1))
            else:
                result.setdefault((u, y), set()).add(1)
        while queue:
            x, p = queue.popleft()
            for y in g.neighbors(x):
                q = 1 - p
                if y in inner:
                    if (y, q) not in seen:
                        seen.add((y, q))
                        queue.append((y, q))
                else:
                    result.setdefault((u, y), set()).add(q)
    return {k: frozenset(v) for k, v in result.items()}


def iter_edges(g: Graph) -> Iterator[Edge]:
    """Undirected edges in ascending order."""
    return iter(sorted(g.edges))
