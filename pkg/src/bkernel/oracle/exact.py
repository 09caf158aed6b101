"""Exact solvers for the four problems, by subset enumeration or branching.

Problems:

``vc``     every edge has an endpoint in the solution.
``oct``    the graph minus the solution is bipartite.
``smwc``   the solution avoids the terminals and separates every pair of
           them; more than ``s`` terminals makes the instance infeasible.
``dtmwc``  like ``smwc`` but terminals may be deleted and there is no
           limit on their number.

Undirected graphs only (arcs are read as undirected edges).
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..errors import BudgetExceeded, ParameterError
from ..graph import AnnotatedBoundariedGraph, Graph, components, is_bipartite

PROBLEMS = ("vc", "oct", "smwc", "dtmwc")
DEFAULT_BUDGET = 20


def canonical_problem(name: str) -> str:
    n = name.lower().replace("_", "-")
    aliases = {"vc-oct": "vc", "vertex-cover": "vc", "mwc": "smwc", "dt-mwc": "dtmwc"}
    n = aliases.get(n, n)
    if n not in PROBLEMS:
        raise ParameterError(f"unknown problem {name!r}")
    return n


@dataclass(frozen=True)
class ExactSolution:
    value: float | int
    witness: frozenset[int]

    @property
    def feasible(self) -> bool:
        return self.value != math.inf


INFEASIBLE = ExactSolution(math.inf, frozenset())


def _terminals(annotations) -> frozenset[int]:
    if not annotations:
        return frozenset()
    first = annotations[0]
    if isinstance(first, tuple) and len(first) == 2 and isinstance(first[0], str):
        return frozenset(first[1])
    return frozenset(first)


def is_feasible(problem: str, g: Graph, terminals: Iterable[int], x: Iterable[int], s: int | None = None) -> bool:
    problem = canonical_problem(problem)
    X = frozenset(x)
    T = frozenset(terminals)
    if problem == "vc":
        return all(u in X or v in X for u, v in g.edges) and all(u in X or v in X for u, v in g.arcs)
    if problem == "oct":
        return is_bipartite(g.underlying_undirected(), g.vertices - X)
    if problem == "smwc":
        if s is None:
            raise ParameterError("smwc needs s")
        if X & T or len(T) > s:
            return False
    alive = T - X
    for comp in components(g, g.vertices - X):
        if len(comp & alive) > 1:
            return False
    return True


def solve_exact(
    problem: str,
    graph: Graph | AnnotatedBoundariedGraph,
    annotations: Sequence = (),
    *,
    s: int | None = None,
    method: str = "branch",
    budget: int = DEFAULT_BUDGET,
) -> ExactSolution:
    """Minimum solution size (``math.inf`` if none) with a witness."""
    problem = canonical_problem(problem)
    if isinstance(graph, AnnotatedBoundariedGraph):
        if not annotations:
            annotations = graph.annotations
        graph = graph.graph
    g = graph.underlying_undirected() if graph.arcs else graph
    if len(g.vertices) > budget:
        raise BudgetExceeded(f"{len(g.vertices)} vertices exceed the exact-solver budget {budget}")
    T = _terminals(annotations) & g.vertices
    if problem == "smwc":
        if s is None:
            raise ParameterError("smwc needs s")
        if len(T) > s:
            return INFEASIBLE
    if method == "enumerate":
        return _enumerate(problem, g, T, s)
    if method == "branch":
        if problem == "vc":
            return _vc_branch(g)
        if problem == "oct":
            return _oct_branch(g)
        return _mwc_branch(g, T, deletable_terminals=(problem == "dtmwc"))
    raise ParameterError(f"unknown method {method!r}")


def _enumerate(problem: str, g: Graph, T: frozenset[int], s: int | None) -> ExactSolution:
    pool = sorted(g.vertices - T) if problem == "smwc" else g.sorted_vertices()
    for k in range(len(pool) + 1):
        for c in itertools.combinations(pool, k):
            if is_feasible(problem, g, T, c, s):
                return ExactSolution(k, frozenset(c))
    return INFEASIBLE


# -- vertex cover ---------------------------------------------------------

def _vc_branch(g: Graph) -> ExactSolution:
    adj = {v: set(g.neighbors(v)) for v in g.vertices}

    def remove(a: dict[int, set[int]], vs: Iterable[int]) -> dict[int, set[int]]:
        vs = set(vs)
        return {u: nb - vs for u, nb in a.items() if u not in vs}

    def solve(a: dict[int, set[int]], k: int) -> list[int] | None:
        taken: list[int] = []
        # forced moves: a degree-1 vertex's neighbour is always safe to take
        while True:
            leaf = next((u for u in sorted(a) if len(a[u]) == 1), None)
            if leaf is None:
                break
            (w,) = a[leaf]
            taken.append(w)
            a = remove(a, [w])
            k -= 1
            if k < 0:
                return None
        live = [u for u in a if a[u]]
        if not live:
            return taken
        if k <= 0:
            return None
        m = sum(len(a[u]) for u in live) // 2
        maxdeg = max(len(a[u]) for u in live)
        if m > k * maxdeg:
            return None
        v = min(live, key=lambda u: (-len(a[u]), u))
        got = solve(remove(a, [v]), k - 1)
        if got is not None:
            return taken + [v] + got
        nb = sorted(a[v])
        if len(nb) <= k:
            got = solve(remove(a, nb + [v]), k - len(nb))
            if got is not None:
                return taken + nb + got
        return None

    for k in range(len(g.vertices) + 1):
        sol = solve(adj, k)
        if sol is not None:
            return ExactSolution(len(sol), frozenset(sol))
    return INFEASIBLE  # unreachable


# -- odd cycle transversal ------------------------------------------------

def _odd_cycle(g: Graph, removed: frozenset[int]) -> list[int] | None:
    color: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for s in g.sorted_vertices():
        if s in removed or s in color:
            continue
        color[s] = 0
        parent[s] = None
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in sorted(g.neighbors(x)):
                if y in removed:
                    continue
                if y not in color:
                    color[y] = 1 - color[x]
                    parent[y] = x
                    queue.append(y)
                elif color[y] == color[x]:
                    px, py = [x], [y]
                    while parent[px[-1]] is not None:
                        px.append(parent[px[-1]])
                    while parent[py[-1]] is not None:
                        py.append(parent[py[-1]])
                    sx = set(px)
                    lca = next(v for v in py if v in sx)
                    return px[: px.index(lca) + 1] + py[: py.index(lca)][::-1]
    return None


def _oct_branch(g: Graph) -> ExactSolution:
    def search(removed: frozenset[int], k: int) -> frozenset[int] | None:
        cyc = _odd_cycle(g, removed)
        if cyc is None:
            return removed
        if k == 0:
            return None
        for v in cyc:
            got = search(removed | {v}, k - 1)
            if got is not None:
                return got
        return None

    for k in range(len(g.vertices) + 1):
        sol = search(frozenset(), k)
        if sol is not None:
            return ExactSolution(len(sol), sol)
    return INFEASIBLE


# -- multiway cut ---------------------------------------------------------

def _terminal_path(g: Graph, T: frozenset[int], removed: frozenset[int]) -> list[int] | None:
    label: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    queue: deque[int] = deque()
    for t in sorted(T - removed):
        label[t] = t
        parent[t] = None
        queue.append(t)
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


def _mwc_branch(g: Graph, T: frozenset[int], deletable_terminals: bool) -> ExactSolution:
    blocked = frozenset() if deletable_terminals else T
    if not deletable_terminals and _terminal_path(g, T, g.vertices - T) is not None:
        return INFEASIBLE

    def search(removed: frozenset[int], k: int) -> frozenset[int] | None:
        path = _terminal_path(g, T, removed)
        if path is None:
            return removed
        if k == 0:
            return None
        for v in path:
            if v in blocked:
                continue
            got = search(removed | {v}, k - 1)
            if got is not None:
                return got
        return None

    for k in range(len(g.vertices) + 1):
        sol = search(frozenset(), k)
        if sol is not None:
            return ExactSolution(len(sol), sol)
    return INFEASIBLE
