"""Boundaried graphs, gluing and the bkg text format.

Two graphs share the boundary {0, 1}.  Gluing identifies those vertices;
everything else must use distinct IDs.  Bypassing a vertex joins its
neighbours, which keeps every path through it alive.
"""
from bkernel import bkg
from bkernel.graph import AnnotatedBoundariedGraph, Graph, bypass, glue

left = AnnotatedBoundariedGraph.of(Graph.build(range(4), [(0, 2), (2, 3), (3, 1)]), {0, 1}, [("terminals", {3})])
right = AnnotatedBoundariedGraph.of(Graph.build([0, 1, 7], [(0, 7), (7, 1)]), {0, 1}, [("terminals", {7})])

whole = glue(left, right)
print("glued vertices:", sorted(whole.graph.vertices))
print("glued edges:   ", sorted(whole.graph.edges))
print("terminals:     ", sorted(whole.terminals))

print("\nafter bypassing 2:", sorted(bypass(left.graph, 2).edges))

text = bkg.serialize(left)
print("\nbkg v1 serialisation of the left side:\n" + text)
assert bkg.parse(text) == left
print("round trip ok")
