"""Odd Cycle Transversal with a local solution.

OCT of a glued graph equals a minimum over partner-side choices of a cut
between copies of the boundary in a two-copy auxiliary graph.  The kernel
keeps a cut cover of those copies and replaces the rest by parity gadgets.
"""
from bkernel.graph import AnnotatedBoundariedGraph, BoundariedGraph, Graph, glue
from bkernel.oct import OctInstance, kernelize_oct, oct_opt_via_decomposition
from bkernel.oracle import PartnerFamily, check_gluing_equivalence, solve_exact

edges = [(i, (i + 1) % 11) for i in range(11)] + [(0, 5), (2, 8)]
g = AnnotatedBoundariedGraph.of(Graph.build(range(11), edges), {0, 1}, [])
S = solve_exact("oct", g).witness
print("local transversal:", sorted(S))

# the decomposition needs a bipartite interior, so put S on the boundary
wide = BoundariedGraph(g.graph, g.boundary | S)
h = BoundariedGraph(Graph.build(sorted(wide.boundary) + [20], [(0, 20), (1, 20), (0, 1)]), wide.boundary)
print("decomposition:", oct_opt_via_decomposition(wide, h),
      " exact:", solve_exact("oct", glue(AnnotatedBoundariedGraph(wide), AnnotatedBoundariedGraph(h))).value)

res = kernelize_oct(OctInstance(g, S))
print(f"{len(g.graph.vertices)} -> {len(res.reduced.graph.vertices)} vertices;",
      "size accounting", res.report["size_accounting"])
print("equivalent:", check_gluing_equivalence("oct", g, res.reduced, 0, PartnerFamily(g.boundary, 3)).passed)
