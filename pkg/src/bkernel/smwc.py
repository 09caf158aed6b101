"""Boundaried kernel for s-Multiway Cut parameterised by a local solution.

Partners glued to the kernel may not place terminals on the boundary;
without that restriction no kernel of bounded size exists (see the
``k2i`` fixture in :mod:`bkernel.oracle.fixtures`).

Pipeline: shrink every terminal neighbourhood with a closest cut
(:func:`rr_smwc_neighbor`), then bypass everything outside a partition
cut cover (:func:`rr_smwc_cutcover`).  The offset is always 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .cut_cover import partition_cut_cover
from .errors import ValidationError
from .flows import closest_cut
from .graph import AnnotatedBoundariedGraph, Graph, bypass_set, components
from .kernel import KernelResult, TraceEntry
from .matroid import field_prime, gammoid_failure_bound


@dataclass(frozen=True)
class SmwcInstance:
    g: AnnotatedBoundariedGraph
    s: int
    local_solution: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "local_solution", frozenset(self.local_solution))

    @property
    def terminals(self) -> frozenset[int]:
        return self.g.terminals

    @property
    def ell(self) -> int:
        return len(self.local_solution)

    def b_prime(self) -> frozenset[int]:
        """S together with the non-terminal boundary; separates the terminals."""
        return self.local_solution | (self.g.boundary - self.terminals)

    def with_graph(self, graph: Graph) -> "SmwcInstance":
        return SmwcInstance(self.g.replace(graph=graph), self.s, self.local_solution & graph.vertices)


def separates(g: Graph, terminals: Iterable[int], x: Iterable[int]) -> bool:
    """Whether no two terminals outside x share a component of g - x."""
    X = frozenset(x)
    alive = frozenset(terminals) - X
    return all(len(c & alive) <= 1 for c in components(g, g.vertices - X))


def validate_smwc(inst: SmwcInstance) -> None:
    S, T, g = inst.local_solution, inst.terminals, inst.g.graph
    if not S <= g.vertices:
        raise ValidationError("local solution uses unknown vertices")
    if S & T:
        raise ValidationError("local solution must avoid the terminals")
    if not separates(g, T, S):
        raise ValidationError("local solution does not separate the terminals")


def rr_smwc_neighbor(inst: SmwcInstance) -> tuple[SmwcInstance, list[TraceEntry]]:
    """Rewire the first terminal with |N(t)| > |B'| to a closest cut toward N(t)."""
    g = inst.g.graph
    bp = inst.b_prime()
    for t in sorted(inst.terminals):
        nt = g.neighbors(t)
        if len(nt) <= len(bp):
            continue
        x = closest_cut(g.remove_vertices([t]), nt, bp)
        h = g.isolate(t).add_edges((t, v) for v in sorted(x))
        return inst.with_graph(h), [TraceEntry("smwc.neighbor", (t, *sorted(x)), 0)]
    return inst, []


def rr_smwc_cutcover(inst: SmwcInstance, seed: int = 0, mode: str = "oracle") -> tuple[SmwcInstance, list[TraceEntry], dict]:
    """Bypass everything outside Z ∪ B ∪ T ∪ N(T) for a partition cover Z."""
    g = inst.g.graph
    T = inst.terminals
    nT = frozenset().union(*(g.neighbors(t) for t in T)) if T else frozenset()
    x_set = inst.g.boundary | nT
    cover = partition_cut_cover(g, x_set, inst.s, mode=mode, seed=seed)
    keep = cover.z | inst.g.boundary | T | nT
    drop = sorted(g.vertices - keep)
    info = {"x_size": len(x_set), "z_size": len(cover.z), "neighborhood_sizes": {t: len(g.neighbors(t)) for t in sorted(T)}}
    if not drop:
        return inst, [], info
    return inst.with_graph(bypass_set(g, drop)), [TraceEntry("smwc.cut_cover", tuple(drop), 0)], info


def canonical_infeasible(g: AnnotatedBoundariedGraph) -> AnnotatedBoundariedGraph:
    """Two adjacent terminals; boundary vertices stay as isolated vertices so gluing still works."""
    base = Graph.build(sorted(g.boundary), next_fresh_id=g.graph.next_fresh_id)
    base, (t1, t2) = base.fresh(2)
    base = base.add_edges([(t1, t2)])
    anns = list(g.annotations) or [("terminals", frozenset())]
    anns[0] = (anns[0][0], frozenset((t1, t2)))
    return AnnotatedBoundariedGraph.of(base, g.boundary, [(anns[0][0], anns[0][1])] + [(n, frozenset()) for n, _ in anns[1:]])


def kernelize_smwc(inst: SmwcInstance, seed: int = 0, cover_mode: str = "oracle") -> KernelResult:
    validate_smwc(inst)
    original = inst
    B = inst.g.boundary
    ell = inst.ell
    report: dict = {
        "problem": "smwc",
        "s": inst.s,
        "seed": seed,
        "cover_mode": cover_mode,
        "boundary_size": len(B),
        "ell": ell,
        "vertices_before": len(inst.g.graph.vertices),
        "edges_before": len(inst.g.graph.edges),
    }
    if len(inst.terminals) > inst.s:
        reduced = canonical_infeasible(inst.g)
        trace = (TraceEntry("smwc.infeasible", tuple(sorted(inst.terminals)), 0),)
        report.update(
            vertices_after=len(reduced.graph.vertices),
            edges_after=len(reduced.graph.edges),
            canonical_infeasible=True,
            failure_probability={"expression": "0", "value": 0.0},
        )
        return KernelResult(reduced, 0, trace, report)
    trace: list[TraceEntry] = []
    while True:
        inst, entries = rr_smwc_neighbor(inst)
        if not entries:
            break
        trace.extend(entries)
    inst, entries, info = rr_smwc_cutcover(inst, seed=seed, mode=cover_mode)
    trace.extend(entries)
    reduced = inst.g
    n_after = len(reduced.graph.vertices)
    sum_nt = sum(info["neighborhood_sizes"].values())
    accounting = info["z_size"] + len(B) + len(inst.terminals) + sum_nt
    scale = max(1, len(B) + ell) ** (inst.s + 1)
    if cover_mode == "matroid":
        nstar = len(original.g.graph.vertices) * (inst.s + 1)
        fp = {
            "expression": "|V*|^2 * 2^|V*| / p",
            "value": gammoid_failure_bound(nstar),
            "p": field_prime(),
        }
    else:
        fp = {"expression": "0", "value": 0.0}
    report.update(
        vertices_after=n_after,
        edges_after=len(reduced.graph.edges),
        canonical_infeasible=False,
        terminals=len(inst.terminals),
        z_size=info["z_size"],
        cover_query_size=info["x_size"],
        neighborhood_sizes={str(t): n for t, n in info["neighborhood_sizes"].items()},
        max_neighborhood=max(info["neighborhood_sizes"].values(), default=0),
        neighborhood_bound=len(B) + ell,
        size_accounting={"bound": accounting, "holds": n_after <= accounting},
        size_scale={"expression": "(|B|+l)^(s+1)", "value": scale, "constant": n_after / scale},
        failure_probability=fp,
    )
    return KernelResult(reduced, 0, tuple(trace), report)
