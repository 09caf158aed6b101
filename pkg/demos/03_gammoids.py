"""Linear representations of gammoids and representative families.

A set U is independent in the gammoid of a digraph with sources S when
|U| vertex-disjoint paths run from S to U.  The random matrix over
GF(2^61 - 1) reproduces that oracle; a representative family then keeps
few sets while preserving every way a small set can be extended.
"""
import itertools

from bkernel.flows import is_linked
from bkernel.graph import Graph
from bkernel.matroid import SetFamily, gammoid_representation, representative_family
from bkernel.oracle import brute_representative_check

d = Graph.build(range(6), (), [(0, 2), (0, 3), (1, 3), (2, 4), (3, 4), (3, 5)])
sources = {0, 1}
rep = gammoid_representation(d, sources, seed=1)
print("rank:", rep.rank)
for us in itertools.combinations(range(6), 2):
    assert rep.is_independent(us) == is_linked(d, sources, us)
print("all pairs agree with the flow oracle")

fam = SetFamily(tuple(frozenset(p) for p in itertools.combinations(range(2, 6), 1)), 1)
small = representative_family(rep, fam, q=1, seed=2)
print("1-representative subfamily of the singletons {2..5}:", [sorted(x) for x in small])
print("brute-force check:", brute_representative_check(rep, fam, small, 1))
