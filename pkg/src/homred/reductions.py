"""Reductions: Clique OR -> Annotated List P4-Colouring -> List H-Colouring.

The composition places the t input instances in a t' x t' grid (t' the
square root of t after padding). Row i selects the "edge checker" block
Q_i, column j the "vertex selector" block P_j; annotations force exactly
one row and one column to be active.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Optional, Sequence

from .errors import InvalidArgument, InvariantViolation, NotApplicable
from .gadgets import Assembly, GadgetKit, KitConfig, build_gadget_kit
from .graph import Graph, connected_components, find_bipartition, induced_subgraph
from .solver import (A, B, C, D, AnnotatedP4Instance, CliqueInstance, ListHomInstance,
                     has_k_clique)
from .structure import (NP_COMPLETE, AssociatedBipartite, Bipartition,
                        bipartite_object, classify_hardness)

Q_KINDS = ("q", "r", "qh", "rh", "s", "t")


@dataclass
class CompositionLayout:
    """Where every named vertex of the composed instance lives.

    Keys are 0-based: p[(j, l, m)], q[(i, e1, e2, f1, f2, kind)], y[j], ...
    ``grid[i][j]`` is the index of the input instance placed at (i, j).
    """
    t: int
    t_prime: int
    n: int
    k: int
    grid: list
    p: dict = field(default_factory=dict)
    q: dict = field(default_factory=dict)
    y: dict = field(default_factory=dict)
    yh: dict = field(default_factory=dict)
    z: dict = field(default_factory=dict)
    zh: dict = field(default_factory=dict)
    padded_from: int = 0

    def family_sizes(self) -> dict:
        return {"P": len(self.p), "Q": len(self.q), "Y": len(self.y), "Yhat": len(self.yh),
                "Z": len(self.z), "Zhat": len(self.zh)}

    def to_json(self) -> dict:
        return {"t": self.t, "t_prime": self.t_prime, "n": self.n, "k": self.k,
                "padded_from": self.padded_from, "grid": self.grid,
                "families": self.family_sizes()}


def expected_counts(t_prime: int, n: int, k: int) -> dict:
    """Closed-form sizes of the composed instance."""
    c = math.comb(k, 2)
    return {
        "vertices": t_prime * n * k + 6 * t_prime * n * n * c + 4 * t_prime,
        "f_pairs": 2 * t_prime * n * n * c + 2 * t_prime,
        "s_total": 2 * t_prime + t_prime * k * (n + 1) + 3 * t_prime * n * n * c,
    }


def cross_compose(instances: Sequence[CliqueInstance]) -> tuple[AnnotatedP4Instance, CompositionLayout]:
    """Compose Clique instances sharing (n, k) into one annotated instance.

    The result is a yes-instance iff some input has a k-clique. Inputs are
    padded by repeating the last one up to the next perfect square.
    """
    if not instances:
        raise InvalidArgument("instances: need at least one")
    n, k = instances[0].graph.n, instances[0].k
    for idx, ci in enumerate(instances):
        if ci.graph.n != n or ci.k != k:
            raise InvalidArgument(f"instances[{idx}]: (n, k) differs from ({n}, {k})")
    t0 = len(instances)
    tp = math.isqrt(t0)
    if tp * tp < t0:
        tp += 1
    padded = list(instances) + [instances[-1]] * (tp * tp - t0)
    grid = [[i * tp + j for j in range(tp)] for i in range(tp)]
    lay = CompositionLayout(tp * tp, tp, n, k, grid, padded_from=t0)
    pairs = list(combinations(range(k), 2))

    lists, labels = [], {}

    def new(lst, label):
        lists.append(frozenset(lst))
        labels[len(lists) - 1] = label
        return len(lists) - 1

    for j, l, m in product(range(tp), range(n), range(k)):
        lay.p[(j, l, m)] = new({A, C}, f"p{j + 1}_{l + 1},{m + 1}")
    for i, e1, e2, (f1, f2) in product(range(tp), range(n), range(n), pairs):
        for kind in Q_KINDS:
            lst = {A, C} if kind in ("s", "t") else {B, D}
            lay.q[(i, e1, e2, f1, f2, kind)] = new(
                lst, f"{kind}{i + 1}_({e1 + 1},{e2 + 1}),{{{f1 + 1},{f2 + 1}}}")
    for fam, name in ((lay.y, "y"), (lay.yh, "yh"), (lay.z, "z"), (lay.zh, "zh")):
        for x in range(tp):
            fam[x] = new({A, C}, f"{name}{x + 1}")

    edges, f_pairs, s_seq = [], [], []
    for i, e1, e2, (f1, f2) in product(range(tp), range(n), range(n), pairs):
        q = lambda kind: lay.q[(i, e1, e2, f1, f2, kind)]
        edges += [(q("qh"), q("s")), (q("rh"), q("t"))]
        f_pairs += [(q("q"), q("qh")), (q("rh"), q("r"))]
        for j in range(tp):
            g = padded[grid[i][j]].graph
            if e1 == e2 or not g.has_edge(e1, e2):
                edges.append((lay.p[(j, e1, f1)], q("q")))
                edges.append((lay.p[(j, e2, f2)], q("r")))
    for x in range(tp):
        f_pairs += [(lay.y[x], lay.yh[x]), (lay.z[x], lay.zh[x])]
    s_seq.append(frozenset(lay.yh.values()))
    s_seq.append(frozenset(lay.zh.values()))
    for j, m in product(range(tp), range(k)):
        s_seq.append(frozenset({lay.y[j]} | {lay.p[(j, l, m)] for l in range(n)}))
    for i, e1, e2, (f1, f2) in product(range(tp), range(n), range(n), pairs):
        s_seq.append(frozenset({lay.q[(i, e1, e2, f1, f2, "s")],
                                lay.q[(i, e1, e2, f1, f2, "t")], lay.z[i]}))

    total = len(lists)
    guest = Graph.from_edges(total, edges, labels)
    v2 = frozenset(v for key, v in lay.q.items() if key[-1] in ("q", "r", "qh", "rh"))
    v1 = frozenset(range(total)) - v2
    out = AnnotatedP4Instance(guest, v1, v2, tuple(lists), tuple(s_seq), frozenset(f_pairs))
    _check_unique_neighbours(out, lay)
    return out, lay


def _check_unique_neighbours(inst: AnnotatedP4Instance, lay: CompositionLayout) -> None:
    p_block = {v: key[0] for key, v in lay.p.items()}
    for key, v in lay.q.items():
        if key[-1] not in ("q", "r"):
            continue
        seen = set()
        for w in inst.guest.neighbors(v):
            j = p_block.get(w)
            if j is not None:
                if j in seen:
                    raise InvariantViolation("unique_neighbour", f"{inst.guest.label(v)} twice in P_{j + 1}")
                seen.add(j)


def clique_witness_colouring(inst: AnnotatedP4Instance, lay: CompositionLayout,
                             i_star: int, j_star: int, clique: Sequence[int]) -> tuple:
    """Explicit colouring for the composed instance from a k-clique of input (i*, j*)."""
    if len(clique) != lay.k:
        raise InvalidArgument("clique: wrong size")
    col = [None] * inst.guest.n
    tp = lay.t_prime
    for x in range(tp):
        col[lay.y[x]], col[lay.yh[x]] = (C, A) if x == j_star else (A, C)
        col[lay.z[x]], col[lay.zh[x]] = (C, A) if x == i_star else (A, C)
    chosen = list(clique)
    for (j, l, m), v in lay.p.items():
        col[v] = A if (j == j_star and chosen[m] == l) else C
    for key, v in lay.q.items():
        if key[0] != i_star:
            col[v] = {"q": B, "r": B, "qh": D, "rh": D, "s": C, "t": C}[key[-1]]
    p_star = {v for (j, _, _), v in lay.p.items() if j == j_star}
    for key, v in lay.q.items():
        if key[0] != i_star or key[-1] not in ("q", "r"):
            continue
        nb = [w for w in inst.guest.neighbors(v) if w in p_star]
        col[v] = B if nb and col[nb[0]] == A else D
        base = key[:-1]
        hat = lay.q[base + (key[-1] + "h",)]
        col[hat] = D if col[v] == B else B
        sv = lay.q[base + ("s" if key[-1] == "q" else "t",)]
        col[sv] = C if col[hat] == D else A
    return tuple(col)


# -- Annotated -> List H ---------------------------------------------------------

@dataclass
class SizeReport:
    vertices_in: int
    vertices_out: int
    f_pairs: int
    s_sets: int
    s_total: int
    not_gadgets: int = 0
    blocking_gadgets: int = 0
    singleton_sets: int = 0
    empty_sets: int = 0
    constant: Optional[int] = None

    @property
    def ratio(self) -> float:
        return self.vertices_out / self.vertices_in if self.vertices_in else 0.0

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["ratio"] = round(self.ratio, 6)
        return d


def size_report(before: AnnotatedP4Instance, after: ListHomInstance, constant: int,
                not_gadgets: int = 0, blocking_gadgets: int = 0, singletons: int = 0,
                empties: int = 0) -> SizeReport:
    """Sizes of a reduction step; raises InvariantViolation if a bound fails."""
    n = before.guest.n
    s_total = sum(len(s) for s in before.s_sequence)
    rep = SizeReport(n, after.guest.n, len(before.f_pairs), len(before.s_sequence), s_total,
                     not_gadgets, blocking_gadgets, singletons, empties, constant)
    if s_total > 3 * n:
        raise InvariantViolation("sum_S_le_3V", f"{s_total} > 3*{n}")
    if len(before.f_pairs) > n:
        raise InvariantViolation("F_le_V", f"{len(before.f_pairs)} > {n}")
    if after.guest.n > constant * max(n, 1):
        raise InvariantViolation("linear_size", f"{after.guest.n} > {constant}*{n}")
    return rep


def annotated_to_list_hom(a: AnnotatedP4Instance, kit: GadgetKit) -> tuple[ListHomInstance, SizeReport, list]:
    """Encode annotations by NOT- and blocking gadgets over the kit's target."""
    for d in (kit.not_ace, kit.not_bd):
        if not d.verified:
            raise InvalidArgument("kit: NOT-gadgets must be verified")
    g = kit.g
    colour = {A: g.a, B: g.b, C: g.c, D: g.d}
    asm = Assembly(kit.h)
    for v in range(a.guest.n):
        asm.add_vertex(colour[x] for x in a.lists[v])
    for u, v in a.guest.sorted_edges():
        asm.add_edge(u, v)
    n_not = 0
    for u, v in sorted(a.f_pairs):
        gad = kit.not_ace if u in a.v1 else kit.not_bd
        asm.insert(gad, dict(zip(gad.distinguished, (u, v))), gad.provenance["kind"])
        n_not += 1
    n_block = singles = empties = 0
    for s in a.s_sequence:
        members = sorted(s)
        if not members:
            asm.add_vertex(())
            asm.log.append({"kind": "empty-S", "new_vertices": 1})
            empties += 1
        elif len(members) == 1:
            asm.restrict(members[0], set(asm.lists[members[0]]) - {g.c})
            asm.log.append({"kind": "singleton-S", "vertex": members[0]})
            singles += 1
        else:
            gad = kit.blocking(len(members))
            asm.insert(gad, dict(zip(gad.distinguished, members)), gad.provenance["kind"])
            n_block += 1
    out = asm.build()
    rep = size_report(a, out, kit.size_constant(), n_not, n_block, singles, empties)
    return out, rep, asm.log


# -- H* lifting ---------------------------------------------------------------------

def _canonical_consistency(inst: ListHomInstance, x_side: frozenset, y_side: frozenset) -> Optional[Bipartition]:
    g = inst.guest
    bp = find_bipartition(g)
    if bp is None:
        return None
    side_a, side_b = set(), set()
    for comp in connected_components(g):
        for flip in (False, True):
            if all(inst.lists[v] <= (x_side if (v in bp.side_a) != flip else y_side) for v in comp):
                for v in comp:
                    (side_a if (v in bp.side_a) != flip else side_b).add(v)
                break
        else:
            return None
    return Bipartition(frozenset(side_a), frozenset(side_b))


def lift_consistent_to_H(inst: ListHomInstance, assoc: AssociatedBipartite) -> ListHomInstance:
    """Same guest, lists L'(x) = {u : u' or u'' in L(x)}; decision is preserved."""
    if inst.target != assoc.hstar:
        raise InvalidArgument("instance target is not this H*")
    n = assoc.h.n
    primes = frozenset(range(n))
    doubles = frozenset(range(n, 2 * n))
    if _canonical_consistency(inst, primes, doubles) is None:
        raise InvalidArgument("instance is not consistent with H*'s bipartition")
    lists = tuple(frozenset(assoc.origin(y) for y in l) for l in inst.lists)
    return ListHomInstance(inst.guest, assoc.h, lists)


# -- dispatch -----------------------------------------------------------------------

@dataclass
class ReductionConfig:
    max_order: int = 7
    cycle_limit: int = 16
    budget: int = 64
    cap: int = 729


@dataclass
class ReductionResult:
    instance: ListHomInstance
    size: SizeReport
    route: str
    provenance: list
    kit: GadgetKit
    component: list
    hstar_instance: Optional[ListHomInstance] = None


_KIT_CACHE: dict = {}


def kit_for_target(h: Graph, config: Optional[ReductionConfig] = None) -> tuple[GadgetKit, list, Optional[AssociatedBipartite]]:
    """Gadget kit on the witness component of h (or of H*), cached per target.

    Returns the kit, the component's vertex list in the bipartite object,
    and the H* data when one was needed.
    """
    cfg = config or ReductionConfig()
    key = (h.n, h.edges, cfg.max_order, cfg.cycle_limit, cfg.budget, cfg.cap)
    if key in _KIT_CACHE:
        return _KIT_CACHE[key]
    report = classify_hardness(h, cfg.max_order, cfg.cycle_limit)
    if report.verdict != NP_COMPLETE:
        raise NotApplicable(f"no hardness witness for target ({report.verdict})")
    obj, assoc = bipartite_object(h)
    wit = report.witness
    anchor = wit["vertices"][0] if wit["kind"] == "cycle" else wit["u"][0]
    comp = next(c for c in connected_components(obj) if anchor in c)
    sub, _ = induced_subgraph(obj, comp)
    kit = build_gadget_kit(sub, KitConfig(cfg.max_order, cfg.cycle_limit, cfg.budget, cap=cfg.cap))
    _KIT_CACHE[key] = (kit, comp, assoc)
    return _KIT_CACHE[key]


def reduce_for_target(a: AnnotatedP4Instance, h: Graph,
                      config: Optional[ReductionConfig] = None) -> ReductionResult:
    """Annotated List P4-Colouring -> List H-Colouring, for any hard h.

    Connected bipartite h is used directly; for a disconnected one the
    lists are confined to the witness component; otherwise the instance is
    built over H* and lifted back.
    """
    kit, comp, assoc = kit_for_target(h, config)
    local, rep, log = annotated_to_list_hom(a, kit)
    obj = assoc.hstar if assoc else h
    lists = tuple(frozenset(comp[x] for x in l) for l in local.lists)
    over_obj = ListHomInstance(local.guest, obj, lists)
    if assoc is None:
        route = "direct" if len(comp) == h.n else "component"
        return ReductionResult(over_obj, rep, route, log, kit, comp)
    lifted = lift_consistent_to_H(over_obj, assoc)
    return ReductionResult(lifted, rep, "hstar", log, kit, comp, hstar_instance=over_obj)


def clique_or(instances: Sequence[CliqueInstance]) -> bool:
    return any(has_k_clique(ci)[0] for ci in instances)
