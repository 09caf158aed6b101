"""Deletable Terminal Multiway Cut.

Two stars of terminal leaves joined at their centres: both centres carry
enough disjoint terminal paths to be forced into every small solution, so
the kernel deletes them and records an offset of 2.
"""
from bkernel.dtmwc import DtmwcInstance, kernelize_dtmwc
from bkernel.graph import AnnotatedBoundariedGraph, Graph
from bkernel.oracle import solve_exact

leaves1, leaves2 = [2, 3, 4, 5], [6, 7, 8, 9]
edges = [(0, l) for l in leaves1] + [(1, l) for l in leaves2] + [(0, 1)]
g = AnnotatedBoundariedGraph.of(Graph.build(range(10), edges), (), [("terminals", leaves1 + leaves2)])
res = kernelize_dtmwc(DtmwcInstance(g, {0, 1}))
print("offset:", res.delta)
print("OPT before:", solve_exact("dtmwc", g).value, " OPT after + offset:", solve_exact("dtmwc", res.reduced).value + res.delta)
print("terminal bound holds:", res.report["terminal_bound"]["holds"])
