"""Vertex-capacitated max-flow and the cut/linkage queries built on it.

Each vertex v is split into an in-node and an out-node joined by an arc
carrying v's capacity; graph arcs become uncapacitated out->in arcs.
Undirected edges count as two opposite arcs.  Augmenting paths are found
by BFS over adjacency lists built in ascending vertex order, so every
result is reproducible.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph


@dataclass(frozen=True)
class CutQuery:
    graph: Graph
    source_set: frozenset[int]
    sink_set: frozenset[int]
    undeletable: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        for name in ("source_set", "sink_set", "undeletable"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        vs = self.graph.vertices
        if not (self.source_set <= vs and self.sink_set <= vs and self.undeletable <= vs):
            from .errors import PreconditionError

            raise PreconditionError("cut query sets must be vertex subsets")


class _Network:
    """Residual network with integer capacities (Edmonds-Karp)."""

    __slots__ = ("head", "cap", "adj")

    def __init__(self, n_nodes: int):
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n_nodes)]

    def add(self, u: int, v: int, c: int) -> None:
        self.adj[u].append(len(self.head))
        self.head.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.head))
        self.head.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int, limit: int | None = None) -> int:
        flow = 0
        head, cap, adj = self.head, self.cap, self.adj
        while limit is None or flow < limit:
            parent = [-1] * len(adj)
            parent[s] = -2
            queue = deque([s])
            while queue and parent[t] == -1:
                x = queue.popleft()
                for e in adj[x]:
                    y = head[e]
                    if cap[e] > 0 and parent[y] == -1:
                        parent[y] = e
                        queue.append(y)
            if parent[t] == -1:
                break
            push = math.inf
            y = t
            while y != s:
                e = parent[y]
                push = min(push, cap[e])
                y = head[e ^ 1]
            if limit is not None:
                push = min(push, limit - flow)
            y = t
            while y != s:
                e = parent[y]
                cap[e] -= push
                cap[e ^ 1] += push
                y = head[e ^ 1]
            flow += push
        return flow

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * len(self.adj)
        seen[s] = True
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in self.adj[x]:
                y = self.head[e]
                if self.cap[e] > 0 and not seen[y]:
                    seen[y] = True
                    queue.append(y)
        return seen


def _split_network(g: Graph, vcap: dict[int, int], big: int):
    """Build the split network; returns (net, index, src, snk)."""
    order = g.sorted_vertices()
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    net = _Network(2 * n + 2)
    for v in order:
        i = index[v]
        net.add(2 * i, 2 * i + 1, vcap[v])
    for v in order:
        i = index[v]
        for w in sorted(g.out_neighbors(v)):
            net.add(2 * i + 1, 2 * index[w], big)
    return net, index, 2 * n, 2 * n + 1


def min_vertex_cut(q: CutQuery) -> tuple[float | int, frozenset[int]]:
    """Minimum (source_set, sink_set) vertex cut; cuts may use source/sink vertices.

    Among minimum cuts the one with the fewest source/sink vertices is
    returned, and among those the one closest to the sources.  Returns
    ``(math.inf, frozenset())`` when no finite cut exists.
    """
    g = q.graph
    S, T = q.source_set, q.sink_set
    if not S or not T:
        return 0, frozenset()
    n = len(g.vertices)
    K = n + 1
    big = K * (n + 2) * (n + 2) + 1
    vcap = {}
    for v in g.vertices:
        if v in q.undeletable:
            vcap[v] = big
        elif v in S or v in T:
            vcap[v] = K + 1
        else:
            vcap[v] = K
    net, index, src, snk = _split_network(g, vcap, big)
    for v in sorted(S):
        net.add(src, 2 * index[v], big)
    for v in sorted(T):
        net.add(2 * index[v] + 1, snk, big)
    flow = net.max_flow(src, snk, limit=big)
    if flow >= big:
        return math.inf, frozenset()
    seen = net.reachable(src)
    cut = frozenset(v for v, i in index.items() if seen[2 * i] and not seen[2 * i + 1])
    return len(cut), cut


def vertex_cut(g: Graph, sources: Iterable[int], sinks: Iterable[int], undeletable: Iterable[int] = ()) -> tuple[float | int, frozenset[int]]:
    """Convenience wrapper around :func:`min_vertex_cut`."""
    return min_vertex_cut(CutQuery(g, frozenset(sources), frozenset(sinks), frozenset(undeletable)))


def _unit_flow(g: Graph, sources: frozenset[int], sinks: frozenset[int]):
    n = len(g.vertices)
    big = n + 2
    net, index, src, snk = _split_network(g, {v: 1 for v in g.vertices}, big)
    for v in sorted(sources):
        net.add(src, 2 * index[v], big)
    for v in sorted(sinks):
        net.add(2 * index[v] + 1, snk, big)
    flow = net.max_flow(src, snk)
    return flow, net, index, src


def closest_cut(g: Graph, t_side: Iterable[int], s_side: Iterable[int]) -> frozenset[int]:
    """The minimum (t_side, s_side) vertex cut closest to t_side.

    All vertices are deletable, including those of t_side and s_side.
    """
    T, S = frozenset(t_side), frozenset(s_side)
    if not T or not S:
        return frozenset()
    _, net, index, src = _unit_flow(g, T, S)
    seen = net.reachable(src)
    return frozenset(v for v, i in index.items() if seen[2 * i] and not seen[2 * i + 1])


def max_disjoint_paths(g: Graph, s: Iterable[int], t: Iterable[int]) -> int:
    """Maximum number of vertex-disjoint s->t paths (length 0 allowed)."""
    S, T = frozenset(s), frozenset(t)
    if not S or not T:
        return 0
    flow, *_ = _unit_flow(g, S, T)
    return flow


def is_linked(g: Graph, s: Iterable[int], t: Iterable[int]) -> bool:
    """Whether t can be reached from s by |t| vertex-disjoint paths."""
    T = frozenset(t)
    if not T:
        return True
    return max_disjoint_paths(g, s, T) == len(T)


def fan_to_distinct_terminals(g: Graph, v: int, terminals: Iterable[int]) -> int:
    """Max number of paths from v to distinct terminals meeting only at v.

    v's own membership in ``terminals`` is ignored.
    """
    targets = frozenset(terminals) - {v}
    if not targets:
        return 0
    n = len(g.vertices)
    big = n + 2
    vcap = {u: 1 for u in g.vertices}
    vcap[v] = big
    net, index, _, snk = _split_network(g, vcap, big)
    for u in sorted(targets):
        net.add(2 * index[u] + 1, snk, 1)
    return net.max_flow(2 * index[v] + 1, snk)
