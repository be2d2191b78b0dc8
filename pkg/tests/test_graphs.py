from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from graphprod.exceptions import CapExceeded
from graphprod.graphs import (SimComplex, SimpleGraph, all_cliques, clique_poset, is_flag,
                              maximal_cliques, order_complex, poset_complex,
                              sub_complex_containing)


def brute_cliques(g):
    n = len(g)
    return {sum(1 << i for i in c) for k in range(n + 1) for c in combinations(range(n), k)
            if all(g.adjacent(a, b) for a, b in combinations(c, 2))}


def test_graph_validation():
    with pytest.raises(ValueError):
        SimpleGraph(["a", "a"])
    with pytest.raises(ValueError):
        SimpleGraph(["a"], [("a", "a")])
    with pytest.raises(ValueError):
        SimpleGraph(["a"], [("a", "b")])
    g = SimpleGraph(["a", "b"], [("a", "b"), ("b", "a")])
    assert g.edges == [("a", "b")]


def test_clique_poset_examples():
    assert len(clique_poset(SimpleGraph.empty(2))) == 3
    assert len(clique_poset(SimpleGraph.cycle(5))) == 11
    assert len(clique_poset(SimpleGraph.complete_on(3))) == 8


def test_clique_poset_cap():
    with pytest.raises(CapExceeded):
        clique_poset(SimpleGraph.empty(11))


def test_order_complex_examples():
    point = order_complex(["x"], lambda a, b: a == b)
    assert point.f_vector() == [1]
    edge = poset_complex(clique_poset(SimpleGraph.path(2)))
    # chains of {}, {a}, {b}, {a,b}: two triangles sharing the edge {} - {a,b}
    assert edge.f_vector() == [4, 5, 2]
    pent = poset_complex(clique_poset(SimpleGraph.cycle(5)))
    assert pent.dimension == 2
    assert pent.f_vector() == [11, 20, 10]
    assert pent.euler_characteristic() == 1


def test_sub_complex_containing():
    g = SimpleGraph.cycle(5)
    P = clique_poset(g)
    K = poset_complex(P)
    assert sub_complex_containing(P, K, 0).f_vector() == K.f_vector()
    v = g.mask(["v0"])
    star = sub_complex_containing(P, K, v)
    assert sorted(star.labels) == ["{v0,v1}", "{v0,v4}", "{v0}"]
    top = sub_complex_containing(P, K, g.mask(["v0", "v1"]))
    assert len(top) == 1
    with pytest.raises(ValueError):
        sub_complex_containing(P, K, g.mask(["v0", "v2"]))


def test_sub_complexes_form_reverse_poset():
    g = SimpleGraph.cycle(5)
    P = clique_poset(g)
    K = poset_complex(P)
    subs = {S: set(sub_complex_containing(P, K, S).vertices) for S in P.elements}
    for a in P.elements:
        for b in P.elements:
            assert P.leq(a, b) == (subs[b] <= subs[a])


def test_is_flag_examples():
    hollow = SimComplex(range(3), [(0, 1), (1, 2), (0, 2)])
    assert not is_flag(hollow)
    filled = SimComplex(range(3), [(0, 1, 2)])
    assert is_flag(filled)
    assert is_flag(poset_complex(clique_poset(SimpleGraph.cycle(5))))


def test_complete_graph_poset_is_power_set():
    g = SimpleGraph.cycle(4).complete()
    assert len(clique_poset(g)) == 2 ** 4


def test_dot_output_is_deterministic():
    g = SimpleGraph.cycle(3)
    assert g.to_dot() == g.to_dot()
    assert '"v0" -- "v1";' in g.to_dot()


graphs = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=15)
    .map(lambda es: SimpleGraph([f"v{i}" for i in range(n)],
                                [(f"v{a}", f"v{b}") for a, b in es if a != b])))


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_clique_enumeration_matches_brute_force(g):
    found = all_cliques(g.adj)
    assert len(found) == len(set(found))
    assert set(found) == brute_cliques(g)
    every = brute_cliques(g)
    maximal = {c for c in every if not any(c != d and c & ~d == 0 for d in every)}
    assert set(maximal_cliques(g.adj)) == maximal


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_order_complex_is_flag(g):
    assert is_flag(poset_complex(clique_poset(g)))


@settings(max_examples=40, deadline=None)
@given(graphs, st.data())
def test_full_subgraph_poset_is_down_closed(g, data):
    keep = data.draw(st.sets(st.sampled_from(g.vertices)))
    sub = g.full_subgraph(keep)
    P, Q = clique_poset(g), clique_poset(sub)
    images = {g.mask(sub.labels(m)) for m in Q.elements}
    assert images <= set(P.elements)
    for m in images:
        for c in P.elements:
            if P.leq(c, m):
                assert c in images
