"""Boundaried kernel for Vertex Cover parameterised by an odd cycle transversal.

The working boundary B̂ starts as B ∪ S for the given transversal S, so
F = V − B̂ induces a bipartite graph.  The pipeline

1. cleans the instance: drops isolated F-vertices, trims crowns and moves
   the vertices left unmatched by a maximum matching of G[F] into B̂
   (:func:`rr_vc_clean_pipeline`);
2. detaches a boundary vertex that sits on too many matched triangles and
   hangs a pendant on it instead (:func:`rr_vc_triangle`);
3. repeatedly bypasses a matching edge that avoids a pair cut cover of the
   directed auxiliary graph and has no common boundary neighbour, paying 1
   each time (:func:`rr_vc_bypass`).

Step 3 keeps the auxiliary graph up to date by bypassing in it directly;
a full rebuild is compared against it every few steps.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import networkx as nx

from .cut_cover import pair_cut_cover
from .flows import CutQuery, min_vertex_cut
from .errors import BkernelError, PreconditionError, ValidationError
from .graph import AnnotatedBoundariedGraph, BoundariedGraph, Graph, bipartite_coloring, bypass_set, is_bipartite
from .kernel import KernelResult, TraceEntry
from .matroid import field_prime, gammoid_failure_bound
from .oracle.exact import solve_exact

Edge = tuple[int, int]


@dataclass(frozen=True)
class VcInstance:
    g: AnnotatedBoundariedGraph
    local_solution: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "local_solution", frozenset(self.local_solution))


@dataclass(frozen=True)
class VcAuxiliary:
    g_star: Graph
    copy_maps: Mapping[int, tuple[int, int]]
    matching: frozenset[Edge]
    coloring: Mapping[int, int]

    def left(self, xs: Iterable[int]) -> frozenset[int]:
        return frozenset(self.copy_maps[x][0] for x in xs)

    def right(self, xs: Iterable[int]) -> frozenset[int]:
        return frozenset(self.copy_maps[x][1] for x in xs)


def validate_vc(inst: VcInstance) -> None:
    g = inst.g.graph
    if not inst.local_solution <= g.vertices:
        raise ValidationError("local solution uses unknown vertices")
    if not is_bipartite(g, g.vertices - inst.local_solution):
        raise ValidationError("local solution is not an odd cycle transversal")


def _nx_bipartite(g: Graph, vs: Iterable[int]) -> nx.Graph:
    keep = frozenset(vs)
    h = nx.Graph()
    h.add_nodes_from(sorted(keep))
    h.add_edges_from(e for e in sorted(g.edges) if e[0] in keep and e[1] in keep)
    return h


def maximum_matching(g: Graph, f_set: Iterable[int], coloring: Mapping[int, int] | None = None) -> frozenset[Edge]:
    """Maximum matching of the bipartite graph G[F] (Hopcroft-Karp)."""
    F = frozenset(f_set)
    color = coloring if coloring is not None else bipartite_coloring(g, F)
    if color is None:
        raise PreconditionError("G[F] is not bipartite")
    h = _nx_bipartite(g, F)
    top = [v for v in sorted(F) if color[v] == 0]
    mate = nx.bipartite.hopcroft_karp_matching(h, top_nodes=top)
    return frozenset((min(u, w), max(u, w)) for u, w in mate.items() if u < w)


def vc_size_bipartite(g: Graph, vs: Iterable[int]) -> int:
    """OPT_VC of a bipartite induced subgraph, by König's theorem."""
    return len(maximum_matching(g, vs))


def conflict(g: Graph, f_set: Iterable[int], b_subset: Iterable[int]) -> int:
    F = frozenset(f_set)
    nb = frozenset(u for x in b_subset for u in g.neighbors(x)) & F
    return vc_size_bipartite(g, F - nb) + len(nb) - vc_size_bipartite(g, F)


def rr_vc_isolated(g: Graph, bh: frozenset[int]) -> tuple[Graph, list[TraceEntry]]:
    iso = sorted(v for v in g.vertices - bh if not g.neighbors(v))
    if not iso:
        return g, []
    return g.remove_vertices(iso), [TraceEntry("vc.isolated", tuple(iso), 0)]


def find_crown(g: Graph, f_set: Iterable[int]) -> tuple[frozenset[int], frozenset[int], frozenset[Edge]] | None:
    """A crown (I, H) with I in F and an H-saturating matching, or None.

    Starts from a maximum independent set O of G[F], matches O against
    N(O) and grows I from the unmatched part of O along matching edges.
    Returns None when every vertex of O is matched.
    """
    F = frozenset(f_set)
    color = bipartite_coloring(g, F)
    if color is None:
        raise PreconditionError("G[F] is not bipartite")
    hf = _nx_bipartite(g, F)
    top = [v for v in sorted(F) if color[v] == 0]
    m = nx.bipartite.hopcroft_karp_matching(hf, top_nodes=top)
    cover = nx.bipartite.to_vertex_cover(hf, m, top_nodes=top)
    O = F - frozenset(cover)
    nO = frozenset(u for v in O for u in g.neighbors(v))
    bip = nx.Graph()
    bip.add_nodes_from(sorted(O))
    bip.add_nodes_from(sorted(nO))
    bip.add_edges_from((v, u) for v in sorted(O) for u in sorted(g.neighbors(v)))
    m2 = nx.bipartite.hopcroft_karp_matching(bip, top_nodes=sorted(O))
    unmatched = frozenset(v for v in O if v not in m2)
    if not unmatched:
        return None
    I = set(unmatched)
    while True:
        H = {u for v in I for u in g.neighbors(v)}
        grown = I | {m2[h] for h in H}
        if grown == I:
            break
        I = grown
    M = frozenset((min(h, m2[h]), max(h, m2[h])) for h in H)
    return frozenset(I), frozenset(H), M


def rr_vc_crown(g: Graph, bh: frozenset[int]) -> tuple[Graph, list[TraceEntry]]:
    crown = find_crown(g, g.vertices - bh)
    if crown is None:
        return g, []
    I, H, M = crown
    extra = sorted((min(i, h), max(i, h)) for i in I for h in g.neighbors(i) if (min(i, h), max(i, h)) not in M)
    if not extra:
        return g, []
    return g.remove_edges(extra), [TraceEntry("vc.crown", tuple(sorted(I | H)), 0)]


def rr_vc_clean_pipeline(g: Graph, bh: Iterable[int]) -> tuple[Graph, frozenset[int], frozenset[Edge], list[TraceEntry], dict]:
    """Isolated vertices and crowns to a fixpoint, then move unmatched F-vertices into B̂."""
    bh = frozenset(bh)
    if not is_bipartite(g, g.vertices - bh):
        raise PreconditionError("G - B is not bipartite")
    trace: list[TraceEntry] = []
    while True:
        g, e8 = rr_vc_isolated(g, bh)
        g, e9 = rr_vc_crown(g, bh)
        trace += e8 + e9
        if not e8 and not e9:
            break
    F = g.vertices - bh
    M = maximum_matching(g, F)
    matched = frozenset(v for e in M for v in e)
    moved = sorted(F - matched)
    info = {"boundary_before_clean": len(bh), "moved": len(moved)}
    if moved:
        trace.append(TraceEntry("vc.clean", tuple(moved), 0))
    return g, bh | frozenset(moved), M, trace, info


def _triangle_pairs(g: Graph, x: int, M: Iterable[Edge]) -> list[Edge]:
    nx_ = g.neighbors(x)
    return [e for e in M if e[0] in nx_ and e[1] in nx_]


def rr_vc_triangle(g: Graph, bh: frozenset[int], M: frozenset[Edge]) -> tuple[Graph, frozenset[int], list[TraceEntry]]:
    """Detach the first x in B̂ lying on more than |B̂| matched triangles; add a pendant."""
    F = g.vertices - bh
    for x in sorted(bh):
        if len(_triangle_pairs(g, x, M)) <= len(bh):
            continue
        h = g.remove_edges((x, u) for u in sorted(g.neighbors(x) & F))
        h, (lx,) = h.fresh(1)
        h = h.add_edges([(x, lx)])
        return h, bh | {lx}, [TraceEntry("vc.triangle", (x, lx), 0)]
    return g, bh, []


def build_vc_auxiliary(
    g: Graph,
    bh: Iterable[int],
    matching: Iterable[Edge],
    prefer: Mapping[int, int] | None = None,
    copy_ids: Mapping[int, tuple[int, int]] | None = None,
) -> VcAuxiliary:
    """Directed auxiliary graph on B̂_L ∪ B̂_R ∪ F.

    F-edges point from colour 0 (L) to colour 1 (R), matching edges both
    ways; x_L points into N(x) ∩ R, N(x) ∩ L points into x_R, and adjacent
    boundary vertices x, y give x_L → y_R and y_L → x_R.
    """
    B = frozenset(bh)
    F = g.vertices - B
    M = frozenset(matching)
    color = bipartite_coloring(g, F, prefer)
    if color is None:
        raise PreconditionError("G - B is not bipartite")
    if copy_ids is None:
        base = g.next_fresh_id
        copy_ids = {x: (base + 2 * i, base + 2 * i + 1) for i, x in enumerate(sorted(B))}
    arcs = []
    for a, b in g.edges:
        if a in F and b in F:
            l, r = (a, b) if color[a] == 0 else (b, a)
            arcs.append((l, r))
            if (a, b) in M:
                arcs.append((r, l))
        elif a in B and b in B:
            al, ar = copy_ids[a]
            bl, br = copy_ids[b]
            arcs += [(al, br), (bl, ar)]
        else:
            x, u = (a, b) if a in B else (b, a)
            xl, xr = copy_ids[x]
            arcs.append((xl, u) if color[u] == 1 else (u, xr))
    verts = set(F) | {c for x in B for c in copy_ids[x]}
    fresh = max(g.next_fresh_id, max(verts, default=-1) + 1)
    gs = Graph.build(verts, (), arcs, next_fresh_id=fresh)
    return VcAuxiliary(gs, {x: copy_ids[x] for x in B}, M, {v: color[v] for v in F})


def bypass_pair(g: Graph, u: int, v: int) -> Graph:
    """Remove the matched pair u, v and join every x ∈ N(u) − v to every y ∈ N(v) − u."""
    xs = sorted(g.neighbors(u) - {v})
    ys = sorted(g.neighbors(v) - {u})
    h = g.remove_vertices([u, v])
    return h.add_edges((x, y) for x in xs for y in ys if x != y)


def bypass_in_auxiliary(aux: VcAuxiliary, u: int, v: int, symmetric: bool = True) -> VcAuxiliary:
    """Bypass {u, v} in the auxiliary graph.

    The plain directed bypass yields only one of the two arcs x_L → y_R,
    y_L → x_R for a new boundary edge {x, y}; with ``symmetric`` the mirror
    arc is added so the result matches a rebuild.
    """
    gs = bypass_set(aux.g_star, [u, v])
    if symmetric:
        side = {}
        for x, (xl, xr) in aux.copy_maps.items():
            side[xl] = (x, 0)
            side[xr] = (x, 1)
        mirror = []
        for a, b in gs.arcs:
            if a in side and b in side and side[a][1] == 0 and side[b][1] == 1:
                x, y = side[a][0], side[b][0]
                mirror.append((aux.copy_maps[y][0], aux.copy_maps[x][1]))
        gs = gs.add_arcs(a for a in mirror if not gs.has_arc(*a))
    e = (min(u, v), max(u, v))
    col = {w: c for w, c in aux.coloring.items() if w not in (u, v)}
    return replace(aux, g_star=gs, matching=aux.matching - {e}, coloring=col)


def _boundary_arcs(aux: VcAuxiliary) -> frozenset[Edge]:
    left = {c[0] for c in aux.copy_maps.values()}
    right = {c[1] for c in aux.copy_maps.values()}
    return frozenset(a for a in aux.g_star.arcs if a[0] in left and a[1] in right)


def auxiliary_equal(a: VcAuxiliary, b: VcAuxiliary, modulo_boundary_arcs: bool = False) -> bool:
    if a.g_star.vertices != b.g_star.vertices:
        return False
    if not modulo_boundary_arcs:
        return a.g_star == b.g_star
    return a.g_star.arcs - _boundary_arcs(a) == b.g_star.arcs - _boundary_arcs(b)


def cover_pairs(aux: VcAuxiliary) -> list[tuple[frozenset[int], frozenset[int]]]:
    B = sorted(aux.copy_maps)
    return [(aux.left(bs), aux.right(bs)) for r in range(len(B) + 1) for bs in itertools.combinations(B, r)]


def boundary_cut(aux: VcAuxiliary, b_subset: Iterable[int]) -> float | int:
    """Minimum number of F-vertices separating B*_L from B*_R in G*.

    Copies are not deletable, so an arc between two copies (an edge inside
    B*) makes the value infinite.  For independent B* in a clean instance
    this equals ``conflict(g, F, B*)``.
    """
    bs = list(b_subset)
    src, dst = aux.left(bs), aux.right(bs)
    return min_vertex_cut(CutQuery(aux.g_star, src, dst, undeletable=src | dst))[0]


def vc_cover(aux: VcAuxiliary, seed: int = 0, mode: str = "oracle"):
    copies_l = aux.left(aux.copy_maps)
    copies_r = aux.right(aux.copy_maps)
    pairs = cover_pairs(aux) if mode == "oracle" else None
    return pair_cut_cover(aux.g_star, copies_l, copies_r, mode=mode, seed=seed, pairs=pairs)


def eligible_pair(g: Graph, bh: frozenset[int], M: Iterable[Edge], z: frozenset[int]) -> Edge | None:
    for u, v in sorted(M):
        if u in z or v in z:
            continue
        if g.neighbors(u) & g.neighbors(v) & bh:
            continue
        return (u, v)
    return None


def rr_vc_bypass(
    g: Graph, bh: frozenset[int], aux: VcAuxiliary, seed: int = 0, mode: str = "oracle"
) -> tuple[Graph, VcAuxiliary, list[TraceEntry], frozenset[int]]:
    """One bypass step; returns the cover used so callers can report it."""
    cover = vc_cover(aux, seed=seed, mode=mode)
    z = cover.z & (g.vertices - bh)
    e = eligible_pair(g, bh, aux.matching, z)
    if e is None:
        return g, aux, [], z
    u, v = e
    return bypass_pair(g, u, v), bypass_in_auxiliary(aux, u, v), [TraceEntry("vc.bypass", (u, v), 1)], z


def kernelize_vc_oct(inst: VcInstance, seed: int = 0, cover_mode: str = "oracle", rebuild_every: int = 4) -> KernelResult:
    validate_vc(inst)
    B = inst.g.boundary
    ell = len(inst.local_solution)
    g0 = inst.g.graph
    g, bh, M, trace, info = rr_vc_clean_pipeline(g0, B | inst.local_solution)
    aux = None
    steps = rebuilds = 0
    z: frozenset[int] = frozenset()
    while True:
        applied = False
        while True:
            g, bh, e12 = rr_vc_triangle(g, bh, M)
            if not e12:
                break
            trace += e12
            applied = True
        if aux is None or applied:
            prefer = None if aux is None else aux.coloring
            aux = build_vc_auxiliary(g, bh, M, prefer=prefer)
        g, aux, e11, z = rr_vc_bypass(g, bh, aux, seed=seed, mode=cover_mode)
        if not e11:
            break
        trace += e11
        M = aux.matching
        steps += 1
        if rebuild_every and steps % rebuild_every == 0:
            rebuilt = build_vc_auxiliary(g, bh, M, prefer=aux.coloring, copy_ids=aux.copy_maps)
            rebuilds += 1
            if not auxiliary_equal(aux, rebuilt):
                raise BkernelError("incrementally maintained auxiliary graph drifted from a rebuild")
    reduced = inst.g.replace(graph=g)
    F = g.vertices - bh
    bound = 2 * len(bh) ** 2 + 2 * len(z)
    scale = max(1, len(B) + ell) ** 3
    if cover_mode == "matroid":
        nstar = 3 * len(aux.g_star.vertices)
        fp = {"expression": "|V*|^2 * 2^|V*| / p", "value": gammoid_failure_bound(nstar), "p": field_prime()}
    else:
        fp = {"expression": "0", "value": 0.0}
    report = {
        "problem": "vc-oct",
        "seed": seed,
        "cover_mode": cover_mode,
        "boundary_size": len(B),
        "ell": ell,
        "working_boundary_size": len(bh),
        "moved_to_boundary": info["moved"],
        "vertices_before": len(g0.vertices),
        "edges_before": len(g0.edges),
        "vertices_after": len(g.vertices),
        "edges_after": len(g.edges),
        "interior_after": len(F),
        "z_size": len(z),
        "bypass_steps": steps,
        "auxiliary_rebuild_checks": rebuilds,
        "size_accounting": {"bound": bound, "holds": len(F) <= bound},
        "size_scale": {"expression": "(|B|+l)^3", "value": scale, "constant": len(g.vertices) / scale},
        "failure_probability": fp,
    }
    delta = sum(t.delta for t in trace)
    return KernelResult(reduced, delta, tuple(trace), report)


def vc_decompose_opt(g: BoundariedGraph, h: BoundariedGraph) -> int:
    """min over B' of |B'| + OPT_VC(G - B') + OPT_VC(H - B')."""
    B = g.boundary
    if h.boundary != B:
        raise PreconditionError("both sides need the same boundary")
    best = None
    bs = sorted(B)
    for r in range(len(bs) + 1):
        for sub in itertools.combinations(bs, r):
            val = r + solve_exact("vc", g.graph.remove_vertices(sub)).value + solve_exact("vc", h.graph.remove_vertices(sub)).value
            best = val if best is None else min(best, val)
    return int(best)
