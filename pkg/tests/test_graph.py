import pytest
from hypothesis import given, settings, strategies as st

from oddsub.generators import cycle, star
from oddsub.graph import (
    Graph, GraphError, build_graph, common_deg2, common_deg2_excl, components, d_big,
    deg2_neighbors, induced_subgraph, is_even_set, is_odd_set, is_star, pendant_neighbors, s_set,
)

from oracles import s_set_by_definition

C5 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]


def small_graphs(max_n=8):
    pairs = st.tuples(st.integers(0, max_n - 1), st.integers(0, max_n - 1)).filter(lambda p: p[0] != p[1])
    return st.lists(pairs, min_size=1, max_size=3 * max_n).map(build_graph)


def test_build_basic():
    k2 = build_graph([(0, 1)])
    assert k2.n == 2 and k2.m == 1 and k2.degree(0) == k2.degree(1) == 1
    c5 = build_graph(C5)
    assert all(c5.degree(v) == 2 for v in c5.vertices)
    assert build_graph([(0, 1), (0, 1), (1, 0)]).m == 1


def test_build_rejects_self_loop():
    with pytest.raises(GraphError, match="3"):
        build_graph([(0, 1), (3, 3)])


def test_declared_isolated_vertices():
    g = build_graph([(0, 1)], vertices=[0, 1, 7])
    assert g.isolated_vertices() == [7]


def test_graph_rejects_asymmetric():
    with pytest.raises(GraphError):
        Graph({0: [1], 1: []})


def test_induced_subgraph():
    c5 = build_graph(C5)
    assert induced_subgraph(c5, {0, 1}).edges() == [(0, 1)]
    assert induced_subgraph(c5, c5.vertices) == c5
    sub = induced_subgraph(c5, {0, 2})
    assert sub.m == 0 and sub.n == 2
    with pytest.raises(GraphError, match="9"):
        induced_subgraph(c5, {0, 9})


def test_odd_and_even_sets():
    c5 = build_graph(C5)
    assert is_odd_set(c5, {0, 1})
    assert not is_odd_set(c5, {0, 1, 2})
    assert is_even_set(c5, c5.vertices)
    assert is_even_set(c5, set())


def test_neighbourhood_statistics_on_c5():
    c5 = build_graph(C5)
    assert common_deg2(c5, 0, 2) == {1}
    assert pendant_neighbors(c5, 0) == frozenset()
    assert deg2_neighbors(c5, 0) == {1, 4}
    assert s_set(c5, 0) == {2, 3}
    assert d_big(c5, 0) == 2


def test_common_deg2_excl():
    # two degree-2 paths 0-1-2 and 0-3-2
    g = build_graph([(0, 1), (1, 2), (0, 3), (3, 2)])
    assert common_deg2(g, 0, 2) == {1, 3}
    assert common_deg2_excl(g, 0, 2, 1) == {3}


def test_pendants_and_s_set_on_star():
    g = star(5)
    assert pendant_neighbors(g, 0) == {1, 2, 3, 4}
    assert s_set(g, 0) == frozenset()
    assert s_set(g, 1) == {0}


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_s_set_matches_definition(g):
    for u in g.vertices:
        assert s_set(g, u) == s_set_by_definition(g, u)


def test_components_and_stars():
    two = build_graph(C5 + [(a + 5, b + 5) for a, b in C5])
    assert sorted(len(c) for c in components(two)) == [5, 5]
    assert is_star(cycle(5), cycle(5).vertices) is None
    assert is_star(star(8), star(8).vertices) == 0
    assert is_star(build_graph([(3, 4)]), {3, 4}) == 3


@settings(max_examples=100, deadline=None)
@given(small_graphs())
def test_handshake(g):
    assert sum(g.degree(v) for v in g.vertices) == 2 * g.m
    for u, v in g.edges():
        assert u in g.adj[v] and v in g.adj[u]
