"""Boundaried kernel for Deletable Terminal Multiway Cut with a local solution.

Rules, applied in this order:

* :func:`rr_dtmwc_iso` drops components with at most one terminal and
  no boundary vertex;
* :func:`rr_dtmwc_high_deg` handles a vertex whose terminal fan reaches
  ``l + |B| + 2``: an interior one is deleted (offset +1), a boundary
  one is cut loose and given two pendant terminals (offset 0);
* :func:`rr_dtmwc_repset` keeps only interior vertices whose triple
  {v, v', v''} lies in a representative family of a gammoid, and
  bypasses the rest.

``l`` is the size of the local solution given at the start and stays
fixed; S ∪ B remains a solution of that size bound throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ValidationError
from .flows import fan_to_distinct_terminals
from .graph import AnnotatedBoundariedGraph, Graph, bypass_set, components
from .kernel import KernelResult, TraceEntry
from .matroid import SetFamily, add_sink_copies, field_prime, gammoid_failure_bound, gammoid_representation, representative_family
from .smwc import separates


@dataclass(frozen=True)
class DtmwcInstance:
    g: AnnotatedBoundariedGraph
    local_solution: frozenset[int] = field(default_factory=frozenset)
    ell: int | None = None  # fixed threshold parameter; defaults to |S|

    def __post_init__(self) -> None:
        object.__setattr__(self, "local_solution", frozenset(self.local_solution))
        if self.ell is None:
            object.__setattr__(self, "ell", len(self.local_solution))

    @property
    def terminals(self) -> frozenset[int]:
        return self.g.terminals

    @property
    def f_set(self) -> frozenset[int]:
        return self.g.graph.vertices - self.g.boundary

    def evolve(self, g: AnnotatedBoundariedGraph, solution) -> "DtmwcInstance":
        return DtmwcInstance(g, frozenset(solution) & g.graph.vertices, self.ell)


def validate_dtmwc(inst: DtmwcInstance) -> None:
    g = inst.g.graph
    if not inst.local_solution <= g.vertices:
        raise ValidationError("local solution uses unknown vertices")
    if not separates(g, inst.terminals, inst.local_solution):
        raise ValidationError("local solution does not separate the terminals")


def rr_dtmwc_iso(inst: DtmwcInstance) -> tuple[DtmwcInstance, list[TraceEntry]]:
    g = inst.g.graph
    T, B = inst.terminals, inst.g.boundary
    drop = [c for c in components(g) if len(c & T) <= 1 and not c & B]
    if not drop:
        return inst, []
    gone = frozenset().union(*drop)
    new = inst.g.replace(graph=g.remove_vertices(gone))
    return inst.evolve(new, inst.local_solution - gone), [TraceEntry("dtmwc.isolated", tuple(sorted(c)), 0) for c in drop]


def rr_dtmwc_high_deg(inst: DtmwcInstance) -> tuple[DtmwcInstance, list[TraceEntry]]:
    g = inst.g.graph
    T, B = inst.terminals, inst.g.boundary
    threshold = inst.ell + len(B) + 2
    for v in g.sorted_vertices():
        if fan_to_distinct_terminals(g, v, T) < threshold:
            continue
        if v not in B:
            new = inst.g.replace(graph=g.remove_vertices([v]))
            return inst.evolve(new, inst.local_solution - {v}), [TraceEntry("dtmwc.high_degree_interior", (v,), 1)]
        h, (t1, t2) = g.isolate(v).fresh(2)
        h = h.add_edges([(v, t1), (v, t2)])
        new = inst.g.replace(graph=h).with_terminal_set(T | {t1, t2})
        return inst.evolve(new, inst.local_solution | {v}), [TraceEntry("dtmwc.high_degree_boundary", (v, t1, t2), 0)]
    return inst, []


def rr_dtmwc_repset(inst: DtmwcInstance, seed: int = 0) -> tuple[DtmwcInstance, list[TraceEntry], dict]:
    g = inst.g.graph
    T, B = inst.terminals, inst.g.boundary
    F = sorted(inst.f_set)
    q = 2 * len(B) + len(T) - 1
    info = {"q": q, "family_size": len(F), "kept": 0, "rank": 0, "q_used": None, "gstar_vertices": 0}
    if not F:
        return inst, [], info
    gstar, cmap = add_sink_copies(g, F, 2)
    rep = gammoid_representation(gstar, B | T, seed)
    triples = {v: frozenset((v, *cmap[v])) for v in F}
    fam = SetFamily(tuple(triples[v] for v in F), 3)
    q_used = min(q, rep.rank - 3)
    info.update(rank=rep.rank, gstar_vertices=len(gstar.vertices), q_used=q_used)
    if q_used < 0:
        kept: set = set()
    else:
        kept = set(representative_family(rep, fam, q_used, seed=seed + 1).sets)
    info["kept"] = len(kept)
    info["kept_bound"] = math.comb(q + 3, 3)
    drop = [v for v in F if v not in T and triples[v] not in kept]
    if not drop:
        return inst, [], info
    new = inst.g.replace(graph=bypass_set(g, drop))
    return inst.evolve(new, inst.local_solution - set(drop)), [TraceEntry("dtmwc.representative", tuple(drop), 0)], info


def kernelize_dtmwc(inst: DtmwcInstance, seed: int = 0) -> KernelResult:
    validate_dtmwc(inst)
    B = inst.g.boundary
    ell = inst.ell
    report: dict = {
        "problem": "dtmwc",
        "seed": seed,
        "boundary_size": len(B),
        "ell": ell,
        "vertices_before": len(inst.g.graph.vertices),
        "edges_before": len(inst.g.graph.edges),
        "terminals_before": len(inst.terminals),
    }
    trace: list[TraceEntry] = []
    while True:
        inst, e3 = rr_dtmwc_iso(inst)
        inst, e45 = rr_dtmwc_high_deg(inst)
        trace.extend(e3 + e45)
        if not e3 and not e45:
            break
    t_after = len(inst.terminals)
    t_bound = (ell + len(B)) * (ell + len(B) + 3)
    inst, e6, info = rr_dtmwc_repset(inst, seed=seed)
    trace.extend(e6)
    reduced = inst.g
    n_after = len(reduced.graph.vertices)
    scale = max(1, len(B) + ell) ** 6
    nstar = info["gstar_vertices"]
    report.update(
        vertices_after=n_after,
        edges_after=len(reduced.graph.edges),
        terminals_after=t_after,
        terminal_bound={"bound": t_bound, "holds": t_after <= t_bound},
        representative={
            "q": info["q"],
            "q_used": info["q_used"],
            "rank": info["rank"],
            "kept": info["kept"],
            "bound": math.comb(2 * len(B) + t_after + 2, 3),
            "holds": info["kept"] <= math.comb(2 * len(B) + t_after + 2, 3),
        },
        size_scale={"expression": "(|B|+l)^6", "value": scale, "constant": n_after / scale},
        failure_probability={
            "expression": "|V*|^2 * 2^|V*| / p + C(|V*|,3) * (q+3) / p",
            "value": min(1.0, gammoid_failure_bound(nstar) + math.comb(max(nstar, 3), 3) * (max(info["q"], 0) + 3) / field_prime()) if nstar else 0.0,
            "p": field_prime(),
        },
    )
    return KernelResult(reduced, sum(t.delta for t in trace), tuple(trace), report)
