import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from homred.errors import InvalidArgument, InvariantViolation, NotApplicable
from homred.graph import Graph, builtin, find_bipartition
from homred.harness import random_consistent_instance
from homred.pipeline import random_batch
from homred.reductions import (Q_KINDS, annotated_to_list_hom, clique_or,
                               clique_witness_colouring, cross_compose, expected_counts,
                               kit_for_target, lift_consistent_to_H, reduce_for_target,
                               size_report)
from homred.solver import (A, B, C, D, CliqueInstance, ListHomInstance, annotated_from_lists,
                           enumerate_all_hom, has_k_clique, solve_annotated_p4, solve_list_hom,
                           verify_assignment)
from homred.structure import associated_bipartite

C6 = builtin("C6")


def batch(graphs, k):
    return [CliqueInstance(g, k) for g in graphs]


def clique_graph(n, clique):
    return Graph.from_edges(n, list(combinations(clique, 2)))


# -- cross-composition ---------------------------------------------------------------

def test_counts_4_3_2():
    a, lay = cross_compose(random_batch(random.Random(0), 4, 3, 2))
    assert a.guest.n == 128 and len(a.f_pairs) == 40
    assert sum(len(s) for s in a.s_sequence) == 74
    assert lay.family_sizes() == {"P": 12, "Q": 108, "Y": 2, "Yhat": 2, "Z": 2, "Zhat": 2}


@settings(max_examples=30)
@given(st.integers(1, 10), st.integers(2, 4), st.integers(2, 3), st.randoms(use_true_random=False))
def test_counts_closed_form(t, n, k, rnd):
    a, lay = cross_compose(random_batch(rnd, t, n, k))
    exp = expected_counts(lay.t_prime, n, k)
    assert a.guest.n == exp["vertices"]
    assert len(a.f_pairs) == exp["f_pairs"]
    assert sum(len(s) for s in a.s_sequence) == exp["s_total"]
    assert sum(len(s) for s in a.s_sequence) <= 3 * a.guest.n and len(a.f_pairs) <= a.guest.n
    assert lay.t_prime ** 2 >= t > (lay.t_prime - 1) ** 2


def test_bipartition_and_lists():
    a, lay = cross_compose(random_batch(random.Random(1), 4, 3, 2))
    assert find_bipartition(a.guest) is not None
    for v in a.v1:
        assert a.lists[v] <= {A, C}
    for v in a.v2:
        assert a.lists[v] <= {B, D}
    for u, v in a.f_pairs:
        assert (u in a.v1) == (v in a.v1)
    assert a.guest.label(lay.p[(0, 0, 0)]) == "p1_1,1"


def test_q_vertices_have_unique_p_neighbour_per_block():
    a, lay = cross_compose(random_batch(random.Random(2), 9, 3, 2))
    blocks = {v: key[0] for key, v in lay.p.items()}
    for key, v in lay.q.items():
        hits = [blocks[w] for w in a.guest.neighbors(v) if w in blocks]
        assert len(hits) == len(set(hits))
        if key[-1] not in ("q", "r"):
            assert not hits


def test_padding_repeats_last():
    b = random_batch(random.Random(3), 5, 3, 2)
    _, lay = cross_compose(b)
    assert lay.t == 9 and lay.padded_from == 5 and lay.t_prime == 3


def test_heterogeneous_batch_rejected():
    with pytest.raises(InvalidArgument):
        cross_compose([CliqueInstance(Graph.from_edges(3, []), 2), CliqueInstance(Graph.from_edges(4, []), 2)])
    with pytest.raises(InvalidArgument):
        cross_compose([])


def test_k_larger_than_n_is_no():
    a, _ = cross_compose(batch([builtin("K3")], 4))
    assert solve_annotated_p4(a) is None


def test_or_semantics_examples():
    empty = Graph.from_edges(3, [])
    tri = clique_graph(3, (0, 1, 2))
    a, _ = cross_compose(batch([empty, empty, empty, empty], 2))
    assert solve_annotated_p4(a) is None
    a, _ = cross_compose(batch([empty, empty, tri, empty], 3))
    f = solve_annotated_p4(a)
    assert f is not None and verify_assignment(a, f)


@settings(max_examples=25)
@given(st.integers(1, 9), st.integers(2, 4), st.integers(2, 3), st.randoms(use_true_random=False))
def test_or_semantics(t, n, k, rnd):
    b = random_batch(rnd, t, n, k)
    a, _ = cross_compose(b)
    f = solve_annotated_p4(a)
    assert (f is not None) == clique_or(b)
    if f is not None:
        assert verify_assignment(a, f)


@settings(max_examples=25)
@given(st.integers(1, 9), st.integers(2, 4), st.integers(2, 3), st.randoms(use_true_random=False))
def test_clique_witness_colouring(t, n, k, rnd):
    b = random_batch(rnd, t, n, k, plant=0.7)
    a, lay = cross_compose(b)
    for idx, ci in enumerate(b):
        ok, clique = has_k_clique(ci)
        if ok:
            i, j = divmod(idx, lay.t_prime)
            col = clique_witness_colouring(a, lay, i, j, sorted(clique))
            assert verify_assignment(a, col)


def test_q_kinds_order():
    assert Q_KINDS == ("q", "r", "qh", "rh", "s", "t")


# -- annotated -> list hom -----------------------------------------------------------

@pytest.fixture(scope="module")
def c6kit():
    return kit_for_target(C6)[0]


def test_plain_instance_ratio_one(c6kit):
    a = annotated_from_lists(builtin("P4"), [{A}, {B}, {C}, {D}])
    out, rep, _ = annotated_to_list_hom(a, c6kit)
    assert rep.ratio == 1.0 and solve_list_hom(out) is not None


def test_single_bd_pair(c6kit):
    a = annotated_from_lists(Graph.from_edges(2, []), [{B, D}, {B, D}], f_pairs=[(0, 1)])
    out, rep, _ = annotated_to_list_hom(a, c6kit)
    assert out.guest.n == 11 and rep.not_gadgets == 1
    f = solve_list_hom(out)
    assert f is not None and f[0] != f[1]


def test_singleton_and_empty_s(c6kit):
    g = Graph.from_edges(2, [(0, 1)])
    a = annotated_from_lists(g, [{A, C}, {B}], s_sequence=[{0}])
    out, rep, _ = annotated_to_list_hom(a, c6kit)
    assert rep.singleton_sets == 1 and out.lists[0] == {c6kit.g.a}
    a = annotated_from_lists(g, [{A, C}, {B}], s_sequence=[set()])
    out, rep, _ = annotated_to_list_hom(a, c6kit)
    assert rep.empty_sets == 1 and solve_list_hom(out) is None


def test_blocking_encodes_not_all_c(c6kit):
    g = Graph.from_edges(3, [])
    a = annotated_from_lists(g, [{C}, {C}, {A, C}], s_sequence=[{0, 1, 2}])
    out, _, _ = annotated_to_list_hom(a, c6kit)
    f = solve_list_hom(out)
    assert f is not None and f[2] == c6kit.g.a
    a = annotated_from_lists(g, [{C}, {C}, {C}], s_sequence=[{0, 1, 2}])
    assert solve_list_hom(annotated_to_list_hom(a, c6kit)[0]) is None


@settings(max_examples=40)
@given(st.randoms(use_true_random=False))
def test_small_annotated_preserved(c6kit, rnd):
    n = rnd.randint(2, 6)
    side = [rnd.random() < 0.5 for _ in range(n)]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if side[u] != side[v] and rnd.random() < 0.5]
    lists = [{x for x in ((A, C) if side[v] else (B, D)) if rnd.random() < 0.8} for v in range(n)]
    g = Graph.from_edges(n, edges)
    a = annotated_from_lists(g, lists)
    same = [v for v in range(n) if (v in a.v1)]
    other = [v for v in range(n) if v not in a.v1]
    f_pairs = [p for p in combinations(same, 2) if rnd.random() < 0.3][:len(same)]
    f_pairs += [p for p in combinations(other, 2) if rnd.random() < 0.3][:len(other)]
    s_seq = [frozenset(rnd.sample(same, rnd.randint(0, len(same))))] if same else []
    a = annotated_from_lists(g, lists, s_seq, f_pairs)
    out, rep, _ = annotated_to_list_hom(a, c6kit)
    assert (solve_annotated_p4(a) is None) == (solve_list_hom(out) is None)
    assert rep.vertices_out <= c6kit.size_constant() * n


def test_size_report_raises():
    g = Graph.from_edges(4, [])
    a = annotated_from_lists(g, [{A, C}] * 4, f_pairs=[(0, 1)])
    small = ListHomInstance(Graph.from_edges(4, []), C6, tuple([frozenset({0})] * 4))
    assert size_report(a, small, 2).ratio == 1.0
    big = ListHomInstance(Graph.from_edges(20, []), C6, tuple([frozenset({0})] * 20))
    with pytest.raises(InvariantViolation) as exc:
        size_report(a, big, 2)
    assert exc.value.invariant == "linear_size"


# -- lifting ---------------------------------------------------------------------------

def test_lift_example():
    assoc = associated_bipartite(builtin("K3"))
    inst = ListHomInstance(Graph.from_edges(2, [(0, 1)]), assoc.hstar, (frozenset({0}), frozenset({4})))
    lifted = lift_consistent_to_H(inst, assoc)
    assert lifted.lists == (frozenset({0}), frozenset({1}))
    assert solve_list_hom(lifted) is not None


def test_lift_rejects_inconsistent():
    assoc = associated_bipartite(builtin("K3"))
    inst = ListHomInstance(Graph.from_edges(2, [(0, 1)]), assoc.hstar, (frozenset({0}), frozenset({1})))
    with pytest.raises(InvalidArgument):
        lift_consistent_to_H(inst, assoc)


@settings(max_examples=40)
@given(st.sampled_from(["K3", "C5", "reflexive:P2"]), st.randoms(use_true_random=False))
def test_lift_preserves_decision(name, rnd):
    assoc = associated_bipartite(builtin(name))
    inst = random_consistent_instance(rnd, assoc.hstar, assoc.h.n)
    lifted = lift_consistent_to_H(inst, assoc)
    assert bool(enumerate_all_hom(inst, cap=1)) == bool(enumerate_all_hom(lifted, cap=1))


# -- routes ------------------------------------------------------------------------------

def _run(h, seed=7, t=4):
    b = random_batch(random.Random(seed), t, 3, 2, plant=0.5)
    a, _ = cross_compose(b)
    res = reduce_for_target(a, h)
    return b, a, res


def test_route_direct_c6():
    b, a, res = _run(C6)
    assert res.route == "direct" and res.size.constant == 127
    assert (solve_list_hom(res.instance) is not None) == clique_or(b)


def test_route_component():
    b, _, res = _run(builtin("C6+K2"))
    assert res.route == "component"
    assert all(x < 6 for l in res.instance.lists for x in l)
    assert (solve_list_hom(res.instance) is not None) == clique_or(b)


def test_route_hstar_k3():
    b, _, res = _run(builtin("K3"))
    assert res.route == "hstar" and res.hstar_instance is not None
    assert res.instance.target == builtin("K3")
    f = solve_list_hom(res.instance)
    assert (f is not None) == clique_or(b)
    if f is not None:
        assert verify_assignment(res.instance, f)


@pytest.mark.parametrize("seed", range(4))
def test_c8_preserves_decision(seed):
    b, _, res = _run(builtin("C8"), seed)
    assert (solve_list_hom(res.instance) is not None) == clique_or(b)
    assert res.instance.guest.n <= res.size.constant * res.size.vertices_in


def test_not_applicable_for_p4():
    a, _ = cross_compose(random_batch(random.Random(0), 1, 2, 2))
    with pytest.raises(NotApplicable):
        reduce_for_target(a, builtin("P4"))
