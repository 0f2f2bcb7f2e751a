from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from homred.errors import BoundExceeded, InvalidArgument, NotFound
from homred.gadgets import (DistinguishedInstance, KitConfig, Assembly, boundary_table,
                            build_blocking_gadget, build_gadget_kit, build_not_gadget,
                            cycle_not_gadget, skeleton_extendable, synthesize_unequal_gadget,
                            unequal_pairs, verify_gadget, walk_chain_instance)
from homred.graph import Graph, builtin
from homred.solver import ListHomInstance, solve_list_hom
from homred.structure import (AvoidingWalks, ExtendedP4Gadget, find_asteroid,
                              derive_special_triples, find_avoiding_walks, is_consistent_instance)

C6, C8, C10 = builtin("C6"), builtin("C8"), builtin("C10")
G6 = ExtendedP4Gadget(0, 1, 2, 3, 4)


def spider(*legs):
    edges, n = [], 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, n))
            prev, n = n, n + 1
    return Graph.from_edges(n, edges)


@pytest.fixture(scope="module")
def not6():
    return cycle_not_gadget(C6, list(range(6)), "ace")


# -- walk chains --------------------------------------------------------------

def test_walk_chain_example():
    d = walk_chain_instance(C6, AvoidingWalks(((0, 5, 0), (2, 3, 2))))
    assert d.n == 3 and d.verified
    assert d.semantics == {(0, 0), (2, 2)}
    assert boundary_table(d) == {(0, 0): True, (0, 2): False, (2, 0): False, (2, 2): True}


def test_walk_chain_rejects_non_avoiding():
    with pytest.raises(InvalidArgument):
        walk_chain_instance(C6, AvoidingWalks(((0, 1, 0), (2, 3, 2))))


# -- unequal gadget -------------------------------------------------------------

def test_unequal_gadget_on_c10():
    t = (0, 4, 6)
    d = synthesize_unequal_gadget(C10, t)
    assert d.verified and d.n <= 64
    table = boundary_table(d)
    assert {k for k, v in table.items() if v} == unequal_pairs(t)
    assert is_consistent_instance(d.instance) is not None


def test_unequal_gadget_errors():
    with pytest.raises(InvalidArgument):
        synthesize_unequal_gadget(C10, (0, 2, 2))
    twins = Graph.from_edges(4, [(0, 1), (0, 2), (3, 1), (3, 2)])  # C4: 0 and 3 are twins
    with pytest.raises(InvalidArgument):
        synthesize_unequal_gadget(twins, (0, 3, 1))
    with pytest.raises(NotFound):
        synthesize_unequal_gadget(C10, (0, 4, 6), budget=0)


# -- NOT gadgets -------------------------------------------------------------------

@pytest.mark.parametrize("k,size", [(6, 11), (8, 17)])
@pytest.mark.parametrize("which", ["ace", "bd"])
def test_cycle_not_gadgets(k, size, which):
    h = builtin(f"C{k}")
    d = cycle_not_gadget(h, list(range(k)), which)
    assert d.n == size and d.verified
    q = (0, 2, 4) if which == "ace" else (1, 3)
    table = boundary_table(d)
    assert len(table) == len(q) ** 2
    assert {t for t, ok in table.items() if ok} == unequal_pairs(q)
    assert is_consistent_instance(d.instance) is not None


def test_not_gadget_six_of_nine(not6):
    assert sum(boundary_table(not6).values()) == 6


def test_dropping_a_list_entry_breaks_verification(not6):
    inst = not6.instance
    v = next(i for i in range(inst.guest.n) if i not in not6.distinguished and len(inst.lists[i]) > 1)
    lists = list(inst.lists)
    lists[v] = frozenset(sorted(lists[v])[:1])
    broken = DistinguishedInstance(ListHomInstance(inst.guest, C6, tuple(lists)),
                                   not6.distinguished, not6.semantics)
    assert not verify_gadget(C6, broken)


def test_not_gadget_on_wrong_cycle():
    with pytest.raises(InvalidArgument):
        cycle_not_gadget(C10, list(range(10)), "ace")
    with pytest.raises(InvalidArgument):
        cycle_not_gadget(C6, [0, 1, 2, 4, 3, 5], "ace")


def test_build_not_gadget_dispatch():
    d = build_not_gadget(C6, G6, "bd", {"cycle": list(range(6))})
    assert d.verified and d.semantics == unequal_pairs((1, 3))
    with pytest.raises(InvalidArgument):
        build_not_gadget(C6, G6, "xy", {"cycle": list(range(6))})
    with pytest.raises(InvalidArgument):
        build_not_gadget(C6, G6, "ace", {})


def test_not_gadget_symmetry(not6):
    a, b = not6.distinguished
    swapped = DistinguishedInstance(not6.instance, (b, a), not6.semantics)
    assert verify_gadget(C6, swapped)


# -- blocking gadgets ------------------------------------------------------------------

def test_blocking_k2(not6):
    d = build_blocking_gadget(C6, G6, 2, not6)
    assert d.n == 71 and d.verified
    table = boundary_table(d)
    assert len(table) == 9 and sum(table.values()) == 8 and not table[(2, 2)]


def test_blocking_k3_excludes_only_all_c(not6):
    d = build_blocking_gadget(C6, G6, 3, not6)
    table = boundary_table(d, cap=27)
    assert [t for t, ok in table.items() if not ok] == [(2, 2, 2)]


def test_blocking_needs_k2(not6):
    with pytest.raises(InvalidArgument):
        build_blocking_gadget(C6, G6, 1, not6)


@pytest.mark.parametrize("k", range(2, 7))
def test_blocking_size_linear(not6, k):
    d = build_blocking_gadget(C6, G6, k, not6)
    assert d.n == 40 * k - 9 and d.n / k < 40


def test_blocking_compositional_marker(not6):
    d = build_blocking_gadget(C6, G6, 7, not6)
    assert d.provenance["verification"] == "compositional" and not d.verified
    assert d.n == 40 * 7 - 9


def test_blocking_cap_bound(not6):
    d = build_blocking_gadget(C6, G6, 4, not6)
    with pytest.raises(BoundExceeded):
        boundary_table(d, cap=80)


@given(st.integers(2, 4), st.data())
def test_skeleton_matches_semantics(k, data):
    colours = data.draw(st.lists(st.sampled_from([1, 2, 3]), min_size=k, max_size=k))
    assert skeleton_extendable(k, colours) == any(c != 1 for c in colours)


@settings(max_examples=20)
@given(st.permutations(range(3)))
def test_blocking_symmetric_in_gammas(not6, perm):
    d = build_blocking_gadget(C6, G6, 3, not6)
    permuted = DistinguishedInstance(d.instance, tuple(d.distinguished[i] for i in perm), d.semantics)
    assert verify_gadget(C6, permuted, cap=27)


def test_blocking_is_consistent(not6):
    assert is_consistent_instance(build_blocking_gadget(C6, G6, 3, not6).instance) is not None


# -- assembly ------------------------------------------------------------------------

def test_assembly_identification_intersects_lists(not6):
    asm = Assembly(C6)
    u = asm.add_vertex({0, 2})
    v = asm.add_vertex({0, 2, 4})
    idx = asm.insert(not6, dict(zip(not6.distinguished, (u, v))), "not-ace")
    assert idx[not6.distinguished[0]] == u
    assert asm.lists[u] == {0, 2} and asm.n == 2 + not6.n - 2
    inst = asm.build()
    assert solve_list_hom(inst) is not None


# -- asteroid route ------------------------------------------------------------------

def test_c10_sigma_matches_walk_ends():
    kit = build_gadget_kit(C10)
    assert kit.route == "asteroid" and kit.not_ace.verified and kit.not_bd.verified
    sigma = kit.not_ace.provenance["sigma"]
    assert set(sigma) == {str(x) for x in kit.g.ace}
    assert set(sigma.values()) <= set(kit.witness["triples"]["ace"])


def test_c10_seam_walks_exist():
    ast = find_asteroid(C10)
    triples = derive_special_triples(C10, ast)
    g = ExtendedP4Gadget(0, 1, 2, 3, 4)
    w = find_avoiding_walks(C10, g.bd, set(triples[2]), 10)
    assert w.length == 0 and set(w.ends) <= {1, 3, 7}


@pytest.mark.parametrize("h", [C10, spider(3, 3, 3)], ids=["C10", "spider333"])
def test_asteroid_kits(h):
    kit = build_gadget_kit(h)
    for d in (kit.not_ace, kit.not_bd):
        assert d.verified and is_consistent_instance(d.instance) is not None
    b = kit.blocking(2)
    assert b.verified and b.n <= 2 * kit.size_constant()


def test_kit_cycle_route_c8():
    kit = build_gadget_kit(C8)
    assert kit.route == "cycle-C8" and (kit.not_ace.n, kit.not_bd.n) == (17, 17)
    assert kit.size_constant() == 205


def test_kit_not_found_on_path():
    with pytest.raises(NotFound):
        build_gadget_kit(builtin("P4"), KitConfig())


def test_blocking_over_colour_products(not6):
    d = build_blocking_gadget(C6, G6, 2, not6)
    for t in product((0, 2, 4), repeat=2):
        assert (t in d.semantics) == (t != (2, 2))
