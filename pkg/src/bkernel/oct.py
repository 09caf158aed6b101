"""Boundaried kernel for Odd Cycle Transversal with a local solution.

The boundary is first extended by the local solution, so the interior F
induces a bipartite graph.  Every boundary vertex x gets two copies x_L
and x_R in an auxiliary graph on F; odd cycles through the boundary then
turn into paths between copies, and Odd Cycle Transversal of a glued
graph becomes a minimum cut problem (:func:`oct_opt_via_decomposition`).
The reduction keeps a cut cover of the copies and replaces the rest of F
by parity gadgets (:func:`rr_oct`).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .cut_cover import pair_cut_cover
from .errors import PreconditionError, ValidationError
from .flows import CutQuery, min_vertex_cut
from .graph import AnnotatedBoundariedGraph, BoundariedGraph, Graph, bipartite_coloring, components, is_bipartite, parity_reachability
from .kernel import KernelResult, TraceEntry
from .matroid import field_prime, gammoid_failure_bound


@dataclass(frozen=True)
class OctAuxiliary:
    g_star: Graph
    copy_maps: Mapping[int, tuple[int, int]]  # x -> (x_L, x_R)
    coloring: Mapping[int, int]  # F vertex -> 0 (L) or 1 (R)

    def left(self, xs: Iterable[int]) -> frozenset[int]:
        return frozenset(self.copy_maps[x][0] for x in xs)

    def right(self, xs: Iterable[int]) -> frozenset[int]:
        return frozenset(self.copy_maps[x][1] for x in xs)

    @property
    def copies(self) -> frozenset[int]:
        return frozenset(c for pair in self.copy_maps.values() for c in pair)


@dataclass(frozen=True)
class OctInstance:
    g: AnnotatedBoundariedGraph
    local_solution: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "local_solution", frozenset(self.local_solution))


def build_oct_auxiliary(
    bg: BoundariedGraph,
    copy_ids: Mapping[int, tuple[int, int]] | None = None,
    prefer: Mapping[int, int] | None = None,
) -> OctAuxiliary:
    """Two-copy auxiliary graph of a boundaried graph with bipartite interior.

    Colour 0 (L) goes to the smallest vertex of each interior component
    unless ``prefer`` says otherwise.  Copy IDs default to fresh IDs
    ``(x_L, x_R)`` in ascending order of x.
    """
    g, B = bg.graph, bg.boundary
    F = g.vertices - B
    color = bipartite_coloring(g, F, prefer)
    if color is None:
        raise PreconditionError("G - B is not bipartite")
    if copy_ids is None:
        base = g.next_fresh_id
        copy_ids = {x: (base + 2 * i, base + 2 * i + 1) for i, x in enumerate(sorted(B))}
    edges = [e for e in g.edges if e[0] in F and e[1] in F]
    for x in sorted(B):
        xl, xr = copy_ids[x]
        for u in g.neighbors(x):
            if u in F:
                edges.append((xl, u) if color[u] == 1 else (xr, u))
            elif u > x:
                yl, yr = copy_ids[u]
                edges.append((yl, xr))
                edges.append((yr, xl))
    verts = set(F) | {c for x in B for c in copy_ids[x]}
    return OctAuxiliary(Graph.build(verts, edges), {x: copy_ids[x] for x in B}, {v: color[v] for v in F})


def _split_sides(aux: OctAuxiliary, k_left: Iterable[int], k_right: Iterable[int]):
    kl, kr = frozenset(k_left), frozenset(k_right)
    same = aux.left(kl) | aux.right(kr)
    diff = aux.left(kr) | aux.right(kl)
    return same, diff


def oct_opt_via_decomposition(g: BoundariedGraph, h: BoundariedGraph, all_colourings: bool = True) -> int:
    """OCT optimum of g glued to h, via cuts in g's auxiliary graph.

    Minimises, over odd cycle transversals X of h and 2-colourings of
    h - X (only one fixed colouring when ``all_colourings`` is false), |X| plus a minimum cut between the "same side" and "different
    side" copies in the auxiliary graph with the copies of B ∩ X removed.
    """
    B = g.boundary
    if h.boundary != B:
        raise PreconditionError("both sides need the same boundary")
    aux = build_oct_auxiliary(g)
    hg = h.graph
    hv = hg.sorted_vertices()
    best = math.inf
    for r in range(len(hv) + 1):
        if r >= best:
            break
        for xs in itertools.combinations(hv, r):
            X = frozenset(xs)
            rest = hg.vertices - X
            if not is_bipartite(hg, rest):
                continue
            base_col = bipartite_coloring(hg, rest)
            comps = [c for c in components(hg, rest) if c & B]
            dead = aux.left(B & X) | aux.right(B & X)
            gs = aux.g_star.remove_vertices(dead)
            for flips in itertools.product((0, 1), repeat=max(0, len(comps) - 1) if all_colourings else 0):
                flip = dict(zip(range(1, len(comps)), flips))
                col = {}
                for ci, c in enumerate(comps):
                    f = flip.get(ci, 0)
                    for v in c & B:
                        col[v] = base_col[v] ^ f
                kl = [v for v in col if col[v] == 0]
                kr = [v for v in col if col[v] == 1]
                same, diff = _split_sides(aux, kl, kr)
                size, _ = min_vertex_cut(CutQuery(gs, same, diff))
                best = min(best, r + size)
    return int(best)


def cover_pairs(aux: OctAuxiliary, boundary: Iterable[int]) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Copy-set pairs whose cuts the reduction must preserve.

    For every assignment of boundary vertices to deleted / left / right:
    (same-side copies ∪ deleted copies, different-side copies ∪ deleted
    copies).  Swapping left and right gives the same pair reversed, so
    only one orientation is listed.
    """
    B = sorted(boundary)
    out = []
    seen = set()
    for labels in itertools.product((0, 1, 2), repeat=len(B)):
        dl = [x for x, l in zip(B, labels) if l == 0]
        kl = [x for x, l in zip(B, labels) if l == 1]
        kr = [x for x, l in zip(B, labels) if l == 2]
        same, diff = _split_sides(aux, kl, kr)
        dead = aux.left(dl) | aux.right(dl)
        pair = (same | dead, diff | dead)
        key = frozenset((pair[0], pair[1]))
        if key in seen:
            continue
        seen.add(key)
        out.append(pair)
    return out


def rr_oct(
    g: AnnotatedBoundariedGraph,
    boundary: Iterable[int],
    seed: int = 0,
    cover_mode: str = "oracle",
    full_cover: bool = False,
) -> tuple[AnnotatedBoundariedGraph, list[TraceEntry], dict]:
    """Keep the cover part of F and replace the rest by parity gadgets.

    ``boundary`` is the working boundary (original boundary plus local
    solution); the returned graph keeps ``g``'s own boundary.
    """
    Bp = frozenset(boundary)
    G = g.graph
    aux = build_oct_auxiliary(BoundariedGraph(G, Bp))
    copies = aux.copies
    pairs = None if full_cover else cover_pairs(aux, Bp)
    cover = pair_cut_cover(aux.g_star, copies, copies, mode=cover_mode, seed=seed, pairs=pairs)
    F = G.vertices - Bp
    keep_f = F & cover.z
    gone = F - keep_f
    info = {"z_size": len(keep_f), "working_boundary": len(Bp), "pairs": 0, "triangles": 0, "cover_queries": cover.query.count()}
    if not gone:
        return g, [], info
    reach = parity_reachability(G, gone)
    H = G.remove_vertices(gone)
    odd_edges, even_pairs, tri = [], [], []
    survivors = sorted(Bp | keep_f)
    for i, u in enumerate(survivors):
        for w in survivors[i + 1 :]:
            par = reach.get((u, w), frozenset())
            if 1 in par and not H.has_edge(u, w):
                odd_edges.append((u, w))
            if 0 in par:
                even_pairs.append((u, w))
    for x in sorted(Bp):
        if 1 in reach.get((x, x), frozenset()):
            tri.append(x)
    H = H.add_edges(odd_edges)
    H, mids = H.fresh(len(even_pairs))
    H = H.add_edges([e for (u, w), m in zip(even_pairs, mids) for e in ((u, m), (m, w))])
    H, corners = H.fresh(2 * len(tri))
    for j, x in enumerate(tri):
        c1, c2 = corners[2 * j], corners[2 * j + 1]
        H = H.add_edges([(x, c1), (x, c2), (c1, c2)])
    info.update(pairs=len(even_pairs), triangles=len(tri))
    affected = tuple(sorted(gone)) + tuple(mids) + tuple(corners)
    return g.replace(graph=H), [TraceEntry("oct.cover", affected, 0)], info


def validate_oct(inst: OctInstance) -> None:
    g = inst.g.graph
    if not inst.local_solution <= g.vertices:
        raise ValidationError("local solution uses unknown vertices")
    if not is_bipartite(g, g.vertices - inst.local_solution):
        raise ValidationError("local solution is not an odd cycle transversal")


def kernelize_oct(inst: OctInstance, seed: int = 0, cover_mode: str = "oracle") -> KernelResult:
    validate_oct(inst)
    B = inst.g.boundary
    Bp = B | inst.local_solution
    ell = len(inst.local_solution)
    n_before = len(inst.g.graph.vertices)
    reduced, trace, info = rr_oct(inst.g, Bp, seed=seed, cover_mode=cover_mode)
    if not trace:
        info["z_size"] = len(inst.g.graph.vertices - Bp)
    n_after = len(reduced.graph.vertices)
    kz = len(Bp) + info["z_size"]
    bound = len(Bp) + info["z_size"] + math.comb(kz, 2) + 2 * len(Bp)
    scale = max(1, len(B) + ell) ** 6
    if cover_mode == "matroid":
        nstar = 3 * (2 * len(Bp) + n_before)
        fp = {"expression": "|V*|^2 * 2^|V*| / p", "value": gammoid_failure_bound(nstar), "p": field_prime()}
    else:
        fp = {"expression": "0", "value": 0.0}
    report = {
        "problem": "oct",
        "seed": seed,
        "cover_mode": cover_mode,
        "boundary_size": len(B),
        "ell": ell,
        "working_boundary_size": len(Bp),
        "vertices_before": n_before,
        "edges_before": len(inst.g.graph.edges),
        "vertices_after": n_after,
        "edges_after": len(reduced.graph.edges),
        "z_size": info["z_size"],
        "subdivision_vertices": info["pairs"],
        "triangles": info["triangles"],
        "size_accounting": {"bound": bound, "holds": n_after <= bound},
        "size_scale": {"expression": "(|B|+l)^6", "value": scale, "constant": n_after / scale},
        "failure_probability": fp,
    }
    return KernelResult(reduced, 0, tuple(trace), report)
