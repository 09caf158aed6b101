"""Vertex cuts and cut covers.

A cut cover Z for a terminal set keeps, for every query, some minimum
cut inside Z.  Vertices outside Z can be bypassed without changing any of
those cut values, which is the engine behind the kernels.
"""
import random

from bkernel.cut_cover import pair_cut_cover, partition_cut_cover, validate_cut_cover
from bkernel.flows import CutQuery, closest_cut, max_disjoint_paths, min_vertex_cut
from bkernel.graph import Graph, bypass_set

# a 3x3 grid; corners 0 and 8
edges = [(r * 3 + c, r * 3 + c + 1) for r in range(3) for c in range(2)]
edges += [(r * 3 + c, (r + 1) * 3 + c) for r in range(2) for c in range(3)]
grid = Graph.build(range(9), edges)

size, cut = min_vertex_cut(CutQuery(grid, {0}, {8}))
print(f"min cut between corners: {size} via {sorted(cut)}")
print("disjoint corner paths:", max_disjoint_paths(grid, {0}, {8}))
print("cut closest to 0:", sorted(closest_cut(grid, {0}, {8})))

terminals = [0, 2, 6, 8]
cover = pair_cut_cover(grid, terminals[:2], terminals[2:])
print("\npair cover over", terminals, "->", sorted(cover.z), "valid:", validate_cut_cover(grid, cover))

part = partition_cut_cover(grid, terminals, 2)
print("partition cover (s=2) ->", sorted(part.z), "valid:", validate_cut_cover(grid, part))

outside = sorted(grid.vertices - part.z - set(terminals))
reduced = bypass_set(grid, outside)
print(f"bypassing {outside} leaves {len(reduced.vertices)} vertices")

# the matroid-based cover is randomised; validate a few seeds
rng = random.Random(0)
ok = sum(validate_cut_cover(grid, pair_cut_cover(grid, {0, 2}, {6, 8}, mode="matroid", seed=s)) for s in range(5))
print(f"matroid pair covers valid on {ok}/5 seeds")
