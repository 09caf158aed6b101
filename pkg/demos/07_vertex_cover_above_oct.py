"""Vertex Cover parameterised by an odd cycle transversal.

After cleaning (perfect matching on the interior), conflicts of boundary
sets equal cuts in a directed auxiliary graph.  Matched pairs outside a
cut cover and without a common boundary neighbour are bypassed; each
bypass lowers the optimum by exactly one.
"""
from bkernel.graph import AnnotatedBoundariedGraph, Graph
from bkernel.oracle import PartnerFamily, check_gluing_equivalence, solve_exact
from bkernel.vc_oct import VcInstance, build_vc_auxiliary, boundary_cut, conflict, kernelize_vc_oct, rr_vc_clean_pipeline

edges = [(i, i + 1) for i in range(9)] + [(0, 9), (3, 7), (2, 5)]
g = AnnotatedBoundariedGraph.of(Graph.build(range(10), edges), {0}, [])
S = solve_exact("oct", g).witness

clean, bh, M, _, _ = rr_vc_clean_pipeline(g.graph, g.boundary | S)
aux = build_vc_auxiliary(clean, bh, M)
F = clean.vertices - bh
for x in sorted(bh):
    print(f"conf({{{x}}}) = {conflict(clean, F, [x])}, cut = {boundary_cut(aux, [x])}")

res = kernelize_vc_oct(VcInstance(g, S))
print(f"\n{len(g.graph.vertices)} -> {len(res.reduced.graph.vertices)} vertices, offset {res.delta}")
print("OPT before:", solve_exact("vc", g).value, " OPT after + offset:", solve_exact("vc", res.reduced).value + res.delta)
print("equivalent:", check_gluing_equivalence("vc", g, res.reduced, res.delta, PartnerFamily(g.boundary, 3)).passed)
