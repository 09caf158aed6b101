"""s-Multiway Cut with a local solution, and why boundary terminals are banned.

The kernel rewires high-degree terminals to a closest cut and bypasses
everything outside a partition cut cover.  Every partner graph without
terminals on the boundary sees the same optimum.
"""
from bkernel.graph import AnnotatedBoundariedGraph, Graph, glue
from bkernel.oracle import PartnerFamily, check_gluing_equivalence, k2i, solve_exact
from bkernel.smwc import SmwcInstance, kernelize_smwc

edges = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]
g = AnnotatedBoundariedGraph.of(Graph.build(range(9), edges), {8}, [("terminals", {0})])
res = kernelize_smwc(SmwcInstance(g, 2, {4}))
print(f"{len(g.graph.vertices)} -> {len(res.reduced.graph.vertices)} vertices; trace:")
for t in res.trace:
    print("  ", t.rule, t.affected)
fam = PartnerFamily(g.boundary, extra_budget=3)
print("equivalent under all partners:", check_gluing_equivalence("smwc", g, res.reduced, 0, fam, s=2).passed)

print("\nK_{2,i} with terminals on both boundary vertices:")
partner = AnnotatedBoundariedGraph.of(Graph.build([0, 1]), {0, 1}, [("terminals", {0, 1})])
for i in range(1, 5):
    print(f"  i={i}: OPT = {solve_exact('smwc', glue(k2i(i), partner), s=2).value}")
print("so no bounded-size kernel can serve such partners")
