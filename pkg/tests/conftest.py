import itertools
import random

import pytest

from bkernel.graph import AnnotatedBoundariedGraph, Graph


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.build(range(n), [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def random_digraph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.build(range(n), (), [(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < p])


def abg(g: Graph, boundary=(), terminals=None) -> AnnotatedBoundariedGraph:
    anns = [] if terminals is None else [("terminals", frozenset(terminals))]
    return AnnotatedBoundariedGraph.of(g, frozenset(boundary), anns)


@pytest.fixture
def rng():
    return random.Random(12345)
