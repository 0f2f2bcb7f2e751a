import pytest
from hypothesis import given, strategies as st

from homred.errors import InvalidArgument
from homred.graph import (Graph, are_anticomplete, builtin, find_bipartition, induced_subgraph,
                          neighborhood, neighborhoods_pairwise_incomparable)

from conftest import graphs

C6 = builtin("C6")


def test_neighborhood_examples():
    p4 = builtin("P4")
    assert neighborhood(p4, 1) == {0, 2}
    assert neighborhood(Graph.from_edges(1, [(0, 0)]), 0) == {0}
    assert neighborhood(C6, 0) == {1, 5}


def test_neighborhood_out_of_range():
    with pytest.raises(InvalidArgument):
        neighborhood(C6, 6)


def test_anticomplete_examples():
    assert are_anticomplete(C6, {0}, {3})
    assert not are_anticomplete(C6, {0}, {1, 3})
    looped = Graph.from_edges(2, [(0, 0)])
    assert not are_anticomplete(looped, {0, 1}, {0})


def test_induced_subgraph_examples():
    path, order = induced_subgraph(C6, {0, 1, 2, 3})
    assert order == [0, 1, 2, 3] and path.edges == {(0, 1), (1, 2), (2, 3)}
    empty, _ = induced_subgraph(C6, set())
    assert empty.n == 0
    indep, _ = induced_subgraph(C6, {0, 2, 4})
    assert indep.n == 3 and not indep.edges


def test_bipartition_examples():
    bp = find_bipartition(C6)
    assert {bp.side_a, bp.side_b} == {frozenset({0, 2, 4}), frozenset({1, 3, 5})}
    assert find_bipartition(builtin("K3")) is None
    assert find_bipartition(Graph.from_edges(2, [(0, 1), (1, 1)])) is None


def test_incomparable_examples():
    assert neighborhoods_pairwise_incomparable(C6, {0, 2, 4})
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert not neighborhoods_pairwise_incomparable(star, {1, 2})
    assert neighborhoods_pairwise_incomparable(star, {3})


def test_edges_validated():
    with pytest.raises(InvalidArgument):
        Graph.from_edges(2, [(0, 2)])


def test_builtins():
    assert builtin("P4").labels == {0: "a", 1: "b", 2: "c", 3: "d"}
    assert len(builtin("Kq:4").edges) == 6
    assert builtin("reflexive:P2").loops() == [0, 1]
    union = builtin("C6+K2")
    assert union.n == 8 and union.has_edge(6, 7)
    with pytest.raises(InvalidArgument):
        builtin("Q7")


@given(graphs(loops=True), st.data())
def test_loop_membership(g, data):
    if g.n == 0:
        return
    v = data.draw(st.integers(0, g.n - 1))
    assert (v in neighborhood(g, v)) == ((v, v) in g.edges)


@given(graphs(loops=True), st.data())
def test_anticomplete_symmetric(g, data):
    a = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)))) if g.n else set()
    b = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)))) if g.n else set()
    assert are_anticomplete(g, a, b) == are_anticomplete(g, b, a)


@given(graphs(loops=True))
def test_bipartition_is_valid(g):
    bp = find_bipartition(g)
    if bp is None:
        return
    assert bp.side_a | bp.side_b == set(range(g.n)) and not bp.side_a & bp.side_b
    assert all((u in bp.side_a) != (v in bp.side_a) for u, v in g.edges)


@given(graphs(loops=True))
def test_full_induced_subgraph_is_identity(g):
    sub, order = induced_subgraph(g, range(g.n))
    assert order == list(range(g.n)) and sub.edges == g.edges


@given(graphs())
def test_adjacency_symmetric(g):
    assert all(g.has_edge(u, v) == g.has_edge(v, u) for u in range(g.n) for v in range(g.n))
