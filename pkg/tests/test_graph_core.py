import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bkernel.errors import ArityError, MissingVertexError, PreconditionError
from bkernel.graph import (
    AnnotatedBoundariedGraph,
    Graph,
    bipartite_coloring,
    bypass,
    bypass_set,
    components,
    glue,
    parity_reachability,
)
from bkernel.oracle.fixtures import k2i

from conftest import abg


def test_graph_invariants():
    with pytest.raises(ValueError):
        Graph.build([0, 1], [(0, 0)])
    with pytest.raises(ValueError):
        Graph(frozenset({0}), frozenset({(0, 1)}))
    assert Graph.build([0], [(0, 1)]).vertices == {0, 1}
    g = Graph.build([3, 7], [(7, 3)])
    assert g.edges == frozenset({(3, 7)})
    assert g.next_fresh_id == 8
    h, ids = g.fresh(2)
    assert ids == [8, 9] and h.next_fresh_id == 10


def test_fresh_counter_not_part_of_identity():
    a = Graph.build([0, 1], [(0, 1)])
    b = Graph.build([0, 1], [(0, 1)], next_fresh_id=10)
    assert a == b and hash(a) == hash(b)


def test_glue_single_shared_vertex():
    g = abg(Graph.build([0]), [0])
    out = glue(g, g)
    assert out.graph.vertices == {0} and out.boundary == {0}


def test_glue_paths():
    g = abg(Graph.build([0, 1], [(0, 1)]), [0])
    h = abg(Graph.build([0, 2], [(0, 2)]), [0])
    out = glue(g, h)
    assert out.graph.edges == {(0, 1), (0, 2)} and out.boundary == {0}


def test_glue_k23_with_terminal_partner():
    g = k2i(3)
    h = AnnotatedBoundariedGraph.of(Graph.build([0, 1]), {0, 1}, [("terminals", {0, 1})])
    out = glue(g, h)
    assert out.graph == g.graph
    assert out.terminals == {0, 1}


def test_glue_errors():
    g = abg(Graph.build([0, 1], [(0, 1)]), [0])
    clash = abg(Graph.build([0, 1]), [0])
    with pytest.raises(PreconditionError):
        glue(g, clash)
    with pytest.raises(ArityError):
        glue(abg(Graph.build([0]), [0], terminals=[]), abg(Graph.build([0]), [0]))


def test_bypass_examples():
    path = Graph.build([0, 1, 2], [(0, 1), (1, 2)])
    assert bypass(path, 1).edges == {(0, 2)}
    d = Graph.build([0, 1, 2], (), [(0, 1), (1, 2), (2, 1), (1, 0)])
    assert bypass(d, 1).arcs == {(0, 2), (2, 0)}
    star = Graph.build(range(4), [(0, 1), (0, 2), (0, 3)])
    assert bypass(star, 0).edges == {(1, 2), (1, 3), (2, 3)}
    with pytest.raises(MissingVertexError):
        bypass(path, 9)


def test_bypass_mixed_directions():
    g = Graph.build([0, 1, 2], [(0, 1)], [(1, 2)])
    assert bypass(g, 1).arcs == {(0, 2)} and not bypass(g, 1).edges


def test_bypass_set_examples():
    p = Graph.build(range(4), [(0, 1), (1, 2), (2, 3)])
    assert bypass_set(p, [1, 2]).edges == {(0, 3)}
    assert bypass_set(p, []) == p
    c4 = Graph.build(range(4), [(0, 1), (1, 2), (2, 3), (3, 0)])
    one = bypass(bypass(c4, 1), 3)
    two = bypass(bypass(c4, 3), 1)
    assert one == two and one.edges == {(0, 2)}


def test_parity_examples():
    p = Graph.build(range(4), [(0, 1), (1, 2), (2, 3)])
    assert parity_reachability(p, {1, 2})[(0, 3)] == {1}
    q = Graph.build(range(3), [(0, 1), (1, 2)])
    assert parity_reachability(q, {1})[(0, 2)] == {0}
    tri = Graph.build(range(3), [(0, 1), (1, 2), (0, 2)])
    assert 1 in parity_reachability(tri, {1, 2})[(0, 0)]


def test_components_and_coloring():
    g = Graph.build(range(5), [(3, 4), (0, 1)])
    assert components(g) == [frozenset({0, 1}), frozenset({2}), frozenset({3, 4})]
    col = bipartite_coloring(g)
    assert col[0] == 0 and col[3] == 0 and col[4] == 1
    assert bipartite_coloring(Graph.build(range(3), [(0, 1), (1, 2), (0, 2)])) is None


small_graphs = st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=14))
)


def _mk(n, pairs):
    return Graph.build(range(n), {(min(a, b), max(a, b)) for a, b in pairs if a != b})


def _connected(g, s, t, removed):
    alive = g.vertices - removed
    return any(s in c and t in c for c in components(g, alive))


@settings(max_examples=60, deadline=None)
@given(small_graphs, st.data())
def test_bypass_preserves_separation(gr, data):
    g = _mk(*gr)
    v = data.draw(st.sampled_from(sorted(g.vertices)))
    h = bypass(g, v)
    rest = sorted(g.vertices - {v})
    for r in range(len(rest) + 1):
        for xs in itertools.combinations(rest, r):
            X = frozenset(xs)
            for s, t in itertools.combinations(sorted(set(rest) - X), 2):
                assert _connected(g, s, t, X) == _connected(h, s, t, X)


@settings(max_examples=60, deadline=None)
@given(small_graphs, st.data())
def test_bypass_set_order_independent(gr, data):
    g = _mk(*gr)
    w = data.draw(st.lists(st.sampled_from(sorted(g.vertices)), unique=True))
    order = data.draw(st.permutations(w))
    a = bypass_set(g, w)
    b = g
    for v in order:
        b = bypass(b, v)
    assert a == b


def test_glue_commutative_associative():
    rng = random.Random(3)
    for _ in range(100):
        B = [0, 1]
        parts = []
        nxt = 2
        for _ in range(3):
            k = rng.randint(0, 2)
            ids = B + list(range(nxt, nxt + k))
            nxt += k
            es = [e for e in itertools.combinations(ids, 2) if rng.random() < 0.5]
            ts = [v for v in ids if rng.random() < 0.3]
            parts.append(abg(Graph.build(ids, es), B, ts))
        a, b, c = parts
        left = glue(glue(a, b), c)
        for x, y, z in itertools.permutations(parts):
            other = glue(x, glue(y, z))
            assert other.graph == left.graph and other.terminals == left.terminals and other.boundary == left.boundary
