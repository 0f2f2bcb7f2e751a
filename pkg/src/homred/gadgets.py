"""Gadget construction and exhaustive verification.

A gadget is a list-homomorphism instance with an ordered tuple of
distinguished guest vertices and a declared set of boundary tuples that
extend to a full solution. Nothing is returned from a constructor in this
module before ``verify_gadget`` has confirmed the declared set exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BoundExceeded, ConstructionError, InvalidArgument, NotFound
from .graph import Graph, bits, mask_of, neighborhoods_pairwise_incomparable
from .solver import ListHomInstance, solve_list_hom
from .structure import (AvoidingWalks, ExtendedP4Gadget, is_extended_p4, is_induced_cycle,
                        verify_avoiding_walks)

DEFAULT_CAP = 729  # 3**6 boundary tuples
DEFAULT_BUDGET = 64


@dataclass
class DistinguishedInstance:
    instance: ListHomInstance
    distinguished: tuple
    semantics: frozenset
    verified: bool = False
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.instance.guest.n

    @property
    def internal(self) -> int:
        """Vertices that are not distinguished."""
        return self.n - len(set(self.distinguished))

    def boundary_lists(self) -> list:
        return [sorted(self.instance.lists[v]) for v in self.distinguished]


# -- composition helper ------------------------------------------------------

class Assembly:
    """Grows a guest graph by gluing gadget copies onto existing vertices.

    Every inserted copy gets fresh indices except for identified vertices,
    whose list becomes the intersection of both lists.
    """

    def __init__(self, target: Graph):
        self.target = target
        self.n = 0
        self.edges: list = []
        self.lists: list = []
        self.log: list = []

    def add_vertex(self, lst: Iterable[int]) -> int:
        self.lists.append(frozenset(lst))
        self.n += 1
        return self.n - 1

    def add_edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def restrict(self, v: int, lst: Iterable[int]) -> None:
        self.lists[v] = self.lists[v] & frozenset(lst)

    def insert(self, gadget: DistinguishedInstance, identify: Mapping[int, int],
               kind: str) -> list:
        """Copy ``gadget`` in; ``identify`` maps gadget vertex -> host vertex."""
        inst = gadget.instance
        index = []
        for v in range(inst.guest.n):
            if v in identify:
                host = identify[v]
                self.restrict(host, inst.lists[v])
                index.append(host)
            else:
                index.append(self.add_vertex(inst.lists[v]))
        for u, v in inst.guest.sorted_edges():
            self.add_edge(index[u], index[v])
        self.log.append({"kind": kind, "identified": {str(k): int(identify[k]) for k in sorted(identify)},
                         "new_vertices": inst.guest.n - len(identify)})
        return index

    def build(self) -> ListHomInstance:
        guest = Graph.from_edges(self.n, self.edges)
        return ListHomInstance(guest, self.target, tuple(self.lists))


# -- verification --------------------------------------------------------------

def boundary_table(d: DistinguishedInstance, cap: int = DEFAULT_CAP) -> dict:
    """Extendability of every boundary tuple, decided by the solver."""
    lists = d.boundary_lists()
    total = 1
    for l in lists:
        total *= len(l)
    if total > cap:
        raise BoundExceeded(f"{total} boundary tuples exceed cap {cap}", limit=cap)
    inst = d.instance
    table = {}
    for tup in product(*lists):
        narrowed = list(inst.lists)
        clash = False
        for v, x in zip(d.distinguished, tup):
            if narrowed[v] != frozenset({x}) and x not in narrowed[v]:
                clash = True
            narrowed[v] = narrowed[v] & {x}
        if clash or len({(v, x) for v, x in zip(d.distinguished, tup)}) != len(set(d.distinguished)):
            table[tup] = False
            continue
        table[tup] = solve_list_hom(ListHomInstance(inst.guest, inst.target, tuple(narrowed))) is not None
    return table


def verify_gadget(h: Graph, d: DistinguishedInstance, cap: int = DEFAULT_CAP) -> bool:
    """Sweep all boundary tuples; sets ``d.verified`` on an exact match."""
    if d.instance.target != h:
        return False
    table = boundary_table(d, cap)
    ok = {t for t, ext in table.items() if ext} == set(d.semantics)
    d.verified = ok
    return ok


def _emit(h: Graph, d: DistinguishedInstance, cap: int = DEFAULT_CAP) -> DistinguishedInstance:
    if not verify_gadget(h, d, cap):
        raise ConstructionError(f"{d.provenance.get('kind', 'gadget')} failed its boundary sweep")
    return d


def unequal_pairs(q: Sequence[int]) -> frozenset:
    return frozenset((x, y) for x in q for y in q if x != y)


# -- walk chains ---------------------------------------------------------------

def walk_chain_instance(h: Graph, walks: AvoidingWalks) -> DistinguishedInstance:
    """Path whose i-th list holds the i-th vertex of every walk."""
    if not verify_avoiding_walks(h, walks):
        raise InvalidArgument("walks: not pairwise avoiding walks of h")
    length = walks.length
    lists = [frozenset(w[i] for w in walks.walks) for i in range(length + 1)]
    guest = Graph.from_edges(length + 1, [(i, i + 1) for i in range(length)])
    inst = ListHomInstance(guest, h, tuple(lists))
    sem = frozenset((w[0], w[-1]) for w in walks.walks)
    d = DistinguishedInstance(inst, (0, length), sem, provenance={
        "kind": "walk-chain", "walks": [list(w) for w in walks.walks],
        "end_assignment": {str(s): e for s, e in walks.end_assignment().items()}})
    return _emit(h, d)


# -- unequal gadget synthesis ----------------------------------------------------

def _nu(h: Graph, mask: int, cache: dict) -> int:
    r = cache.get(mask)
    if r is None:
        r = 0
        for x in bits(mask):
            r |= h.adj[x]
        cache[mask] = r
    return r


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def _relation_paths(h: Graph, t: Sequence[int], max_len: int):
    """Breadth-first search over list-paths leaving the triple ``t``.

    A state records, for each start in ``t``, the set of vertices a walk
    respecting the lists so far can occupy. Closing a state with the list
    ``t`` gives the path's relation on ``t``; a path is useful when it keeps
    every unequal pair. Yields (excluded diagonal set, list sequence) for
    the first path found per excluded set, shortest first.
    """
    tmask = mask_of(t)
    m = len(t)
    cache: dict = {}
    start = tuple(1 << x for x in t)
    parent = {start: None}
    frontier = [start]
    reported: set = set()
    for depth in range(max_len):
        hits = []
        for st in frontier:
            fin = [_nu(h, r, cache) & tmask for r in st]
            if not all(fin[i] >> t[j] & 1 for i in range(m) for j in range(m) if i != j):
                continue
            excl = frozenset(t[i] for i in range(m) if not fin[i] >> t[i] & 1)
            if excl and excl not in reported:
                reported.add(excl)
                seq = []
                cur = st
                while parent[cur] is not None:
                    seq.append(_union(cur))
                    cur = parent[cur]
                hits.append((excl, seq[::-1]))
        yield depth + 1, hits
        nxt = []
        for st in frontier:
            union = 0
            for r in st:
                union |= _nu(h, r, cache)
            for keep in _submasks(union):
                ns = tuple(_nu(h, r, cache) & keep for r in st)
                if 0 in ns or ns in parent:
                    continue
                parent[ns] = st
                nxt.append(ns)
        if not nxt:
            return
        frontier = nxt


def _union(state) -> int:
    u = 0
    for r in state:
        u |= r
    return u


def synthesize_unequal_gadget(h: Graph, t: Sequence[int], budget: int = DEFAULT_BUDGET,
                              cap: int = DEFAULT_CAP) -> DistinguishedInstance:
    """Gadget on ``t`` whose two distinguished vertices must differ.

    Candidates are bundles of list-paths between the two distinguished
    vertices. Each path's relation on ``t`` keeps all unequal pairs and
    drops at least one diagonal pair; bundles whose dropped pairs cover
    the diagonal realise exactly "unequal". Path lengths grow until the
    cheapest cover fits in ``budget`` vertices.
    """
    t = tuple(t)
    if len(set(t)) != 3:
        raise InvalidArgument("t: need three distinct vertices")
    if not neighborhoods_pairwise_incomparable(h, t):
        raise InvalidArgument("t: neighbourhoods are not pairwise incomparable")
    if budget < 2:
        raise NotFound(f"budget {budget} leaves no room for a gadget")
    found: dict = {}
    best = None
    for length, hits in _relation_paths(h, t, max_len=budget - 1):
        for excl, seq in hits:
            found[excl] = seq
        best = _cheapest_cover(found, set(t))
        if best is not None:
            break
        if length - 1 + 2 > budget:
            break
    if best is None:
        raise NotFound(f"no unequal gadget for {t} within {budget} vertices")
    cost = 2 + sum(len(seq) for seq in best)
    if cost > budget:
        raise NotFound(f"cheapest unequal gadget needs {cost} > {budget} vertices")
    asm = Assembly(h)
    d1 = asm.add_vertex(t)
    d2 = asm.add_vertex(t)
    for seq in best:
        prev = d1
        for lst in seq:
            v = asm.add_vertex(bits(lst))
            asm.add_edge(prev, v)
            prev = v
        asm.add_edge(prev, d2)
    inst = asm.build()
    d = DistinguishedInstance(inst, (d1, d2), unequal_pairs(t), provenance={
        "kind": "unequal", "triple": list(t), "paths": len(best)})
    return _emit(h, d, cap)


def _cheapest_cover(found: dict, need: set):
    keys = sorted(found, key=lambda k: (len(found[k]), sorted(k)))
    best, best_cost = None, None
    n = len(keys)
    for mask in range(1, 1 << n):
        chosen = [keys[i] for i in range(n) if mask >> i & 1]
        if set().union(*chosen) != need:
            continue
        cost = sum(len(found[k]) for k in chosen)
        if best_cost is None or cost < best_cost:
            best, best_cost = [found[k] for k in chosen], cost
    return best


# -- NOT gadgets -------------------------------------------------------------------

# Three parallel rows between gamma_1 and gamma_2; entries are cycle
# positions, gamma lists are positions {0, 2, 4}.
CYCLE_NOT_ROWS = {
    6: [[(3, 5), (0, 4), (1, 5)],
        [(1, 5), (0, 2), (1, 3)],
        [(1, 3), (2, 4), (3, 5)]],
    8: [[(3, 7), (4, 6), (3, 5), (2, 4), (1, 3)],
        [(1, 5), (2, 6), (1, 7), (0, 2), (1, 3)],
        [(1, 5, 7), (0, 6), (5, 7), (4, 6), (3, 5, 7)]],
}


def cycle_not_gadget(h: Graph, cycle: Sequence[int], which: str) -> DistinguishedInstance:
    """NOT-gadget read off the hard-coded C6/C8 row pattern.

    ``which`` is "ace" (gamma lists x0,x2,x4) or "bd" (x1,x3, obtained by
    dropping x4 and shifting every position by one).
    """
    k = len(cycle)
    if k not in CYCLE_NOT_ROWS:
        raise InvalidArgument("cycle gadgets exist for induced C6 and C8 only")
    if not is_induced_cycle(h, cycle):
        raise InvalidArgument("cycle: not an induced cycle of h")
    shift = {"ace": 0, "bd": 1}[which]
    gamma = (0, 2, 4) if which == "ace" else (0, 2)
    pos = lambda i: cycle[(i + shift) % k]
    asm = Assembly(h)
    g1 = asm.add_vertex(pos(i) for i in gamma)
    g2 = asm.add_vertex(pos(i) for i in gamma)
    for row in CYCLE_NOT_ROWS[k]:
        prev = g1
        for entry in row:
            v = asm.add_vertex(pos(i) for i in entry)
            asm.add_edge(prev, v)
            prev = v
        asm.add_edge(prev, g2)
    q = tuple(pos(i) for i in gamma)
    d = DistinguishedInstance(asm.build(), (g1, g2), unequal_pairs(q), provenance={
        "kind": f"not-{which}", "route": f"cycle-C{k}", "cycle": list(cycle)})
    return _emit(h, d)


def composed_not_gadget(h: Graph, walks: AvoidingWalks, unequal: DistinguishedInstance,
                        which: str) -> DistinguishedInstance:
    """Two walk-chain copies glued onto an unequal gadget at its delta vertices."""
    if not unequal.verified:
        raise InvalidArgument("unequal gadget must be verified")
    chain = walk_chain_instance(h, walks)
    t = set(unequal.instance.lists[unequal.distinguished[0]])
    if set(walks.ends) - t:
        raise InvalidArgument("walks must end in the unequal gadget's triple")
    asm = Assembly(h)
    index = asm.insert(unequal, {}, "unequal")
    d1, d2 = index[unequal.distinguished[0]], index[unequal.distinguished[1]]
    end = chain.distinguished[1]
    c1 = asm.insert(chain, {end: d1}, "walk-chain")
    c2 = asm.insert(chain, {end: d2}, "walk-chain")
    g1, g2 = c1[chain.distinguished[0]], c2[chain.distinguished[0]]
    d = DistinguishedInstance(asm.build(), (g1, g2), unequal_pairs(walks.starts), provenance={
        "kind": f"not-{which}", "route": "asteroid", "delta": [d1, d2],
        "sigma": {str(s): e for s, e in walks.end_assignment().items()},
        "parts": asm.log})
    return _emit(h, d)


def build_not_gadget(h: Graph, g: ExtendedP4Gadget, q: str, aux: Mapping) -> DistinguishedInstance:
    """NOT-gadget for Q = {a,c,e} (``q="ace"``) or {b,d} (``q="bd"``).

    ``aux`` holds either ``{"cycle": [...]}`` (an induced C6/C8 whose first
    five vertices are ``g``) or ``{"walks": AvoidingWalks, "unequal":
    DistinguishedInstance}``.
    """
    if q not in ("ace", "bd"):
        raise InvalidArgument("q must be 'ace' or 'bd'")
    if not is_extended_p4(h, g):
        raise InvalidArgument("g is not an extended P4 gadget of h")
    if aux and "cycle" in aux:
        cycle = list(aux["cycle"])
        if tuple(cycle[:5]) != g.as_tuple():
            raise InvalidArgument("cycle route needs g = first five cycle vertices")
        return cycle_not_gadget(h, cycle, q)
    if not aux or "walks" not in aux or "unequal" not in aux:
        raise InvalidArgument("asteroid route needs aux walks and an unequal gadget")
    walks = aux["walks"]
    want = g.ace if q == "ace" else g.bd
    if walks.starts != tuple(want):
        raise InvalidArgument(f"walks must start at {want}")
    return composed_not_gadget(h, walks, aux["unequal"], q)


# -- blocking gadget -------------------------------------------------------------

def blocking_skeleton(k: int):
    """Triangle-list skeleton: vertices, lists over colours 1..3, edges, gammas."""
    if k < 2:
        raise InvalidArgument("blocking gadget needs k >= 2")
    lists = []
    for i in range(1, k + 1):
        lists.append({2} if i == 1 else {1, 2})   # x_i
        lists.append({1, 2, 3})                   # y_i
        lists.append({3} if i == k else {3, 1})   # z_i
    path = list(range(3 * k))
    gammas = list(range(3 * k, 4 * k))
    lists += [{1, 2, 3}] * k
    edges = [(path[i], path[i + 1]) for i in range(3 * k - 1)]
    edges += [(gammas[i], 3 * i + 1) for i in range(k)]
    return lists, edges, gammas


def build_blocking_gadget(h: Graph, g: ExtendedP4Gadget, k: int, not_ace: DistinguishedInstance,
                          cap: int = DEFAULT_CAP) -> DistinguishedInstance:
    """k distinguished vertices over {a,c,e}, extendable unless all are c.

    Exhaustively verified when 3**k <= cap. Beyond that the gadget is the
    same composition of a verified NOT-gadget and the skeleton, and is
    marked with ``verification="compositional"`` instead.
    """
    if k < 2:
        raise InvalidArgument("blocking gadget needs k >= 2")
    if not not_ace.verified:
        raise InvalidArgument("NOT-gadget must be verified")
    colour = {1: g.c, 2: g.a, 3: g.e}
    lists, edges, gammas = blocking_skeleton(k)
    asm = Assembly(h)
    for l in lists:
        asm.add_vertex(colour[x] for x in l)
    a1, a2 = not_ace.distinguished
    for u, v in edges:
        asm.insert(not_ace, {a1: u, a2: v}, "not-ace")
    ace = sorted((g.a, g.c, g.e))
    sem = frozenset(t for t in product(ace, repeat=k) if any(x != g.c for x in t))
    d = DistinguishedInstance(asm.build(), tuple(gammas), sem, provenance={
        "kind": f"blocking:{k}", "skeleton_vertices": 4 * k, "not_copies": len(edges)})
    if 3 ** k <= cap:
        return _emit(h, d, cap)
    d.provenance["verification"] = "compositional"
    return d


def skeleton_extendable(k: int, colours: Sequence[int]) -> bool:
    """Brute-force the triangle skeleton for one colouring of the gammas."""
    lists, edges, gammas = blocking_skeleton(k)
    fixed = dict(zip(gammas, colours))
    free = [v for v in range(4 * k) if v not in fixed]
    for choice in product(*(sorted(lists[v]) for v in free)):
        col = dict(fixed)
        col.update(zip(free, choice))
        if all(col[v] in lists[v] for v in col) and all(col[u] != col[v] for u, v in edges):
            return True
    return False


# -- gadget kit -------------------------------------------------------------------

@dataclass
class KitConfig:
    max_order: int = 7
    cycle_limit: int = 16
    budget: int = DEFAULT_BUDGET
    walk_len: int = 64
    cap: int = DEFAULT_CAP


@dataclass
class GadgetKit:
    """Everything needed to encode Annotated List P4-Colouring into ``h``."""
    h: Graph
    g: ExtendedP4Gadget
    not_ace: DistinguishedInstance
    not_bd: DistinguishedInstance
    route: str
    witness: dict
    cap: int = DEFAULT_CAP
    _blocking: dict = field(default_factory=dict, repr=False)

    def blocking(self, k: int) -> DistinguishedInstance:
        if k not in self._blocking:
            self._blocking[k] = build_blocking_gadget(self.h, self.g, k, self.not_ace, self.cap)
        return self._blocking[k]

    def size_constant(self) -> int:
        """Per-vertex blow-up bound implied by |F| <= |V| and sum|S| <= 3|V|.

        A blocking gadget of arity m adds 3m skeleton vertices and 4m-1
        NOT copies, so at most 3 + 4*i_ace new vertices per member of S.
        """
        i_not = max(self.not_ace.internal, self.not_bd.internal)
        return 1 + i_not + 3 * (3 + 4 * self.not_ace.internal)


def asteroid_from_cycle(cycle: Sequence[int]):
    """Order-3 asteroid inside an induced cycle of length >= 10."""
    from .structure import AsteroidWitness
    x = list(cycle)
    n = len(x)
    if n < 10:
        raise InvalidArgument("need a cycle of length >= 10")
    paths = (tuple(x[0:5]), tuple(x[4:7]), tuple(x[6:]) + (x[0],))
    return AsteroidWitness((x[0], x[4], x[6]), (x[1], x[3], x[7]), paths)


def build_gadget_kit(h: Graph, config: Optional[KitConfig] = None) -> GadgetKit:
    """Locate a hardness witness in the connected bipartite ``h`` and build both NOT-gadgets.

    Induced C6/C8 use the fixed row pattern. Otherwise an asteroid supplies
    special triples, and the search runs over extended P4 gadgets and
    triples until avoiding walks exist for both {a,c,e} and {b,d}.
    """
    from .structure import (derive_special_triples, find_asteroid, find_long_induced_cycle,
                            iter_extended_p4, target_sides, verify_asteroid)
    cfg = config or KitConfig()
    target_sides(h)
    cycle = find_long_induced_cycle(h, 6, cfg.cycle_limit)
    if cycle and len(cycle) in (6, 8):
        g = ExtendedP4Gadget(*cycle[:5])
        return GadgetKit(h, g, cycle_not_gadget(h, cycle, "ace"), cycle_not_gadget(h, cycle, "bd"),
                         f"cycle-C{len(cycle)}", {"kind": "cycle", "vertices": list(cycle)}, cfg.cap)
    if cycle:
        ast = asteroid_from_cycle(cycle)
        assert verify_asteroid(h, ast)
    else:
        ast = find_asteroid(h, cfg.max_order)
    if ast is None:
        raise NotFound("no induced cycle or asteroid within bounds")
    triples = derive_special_triples(h, ast)
    witness = {"kind": "asteroid", "u": list(ast.u_seq), "v": list(ast.v_seq),
               "paths": [list(p) for p in ast.paths]}
    choice = _pick_walks(h, triples, iter_extended_p4(h), cfg.walk_len)
    if choice is None:
        raise NotFound("no extended P4 gadget admits avoiding walks into the special triples")
    g, (t_ace, w_ace), (t_bd, w_bd) = choice
    unequal = {}
    for t in {t_ace, t_bd}:
        unequal[t] = synthesize_unequal_gadget(h, t, cfg.budget, cfg.cap)
    na = composed_not_gadget(h, w_ace, unequal[t_ace], "ace")
    nb = composed_not_gadget(h, w_bd, unequal[t_bd], "bd")
    witness["triples"] = {"ace": list(t_ace), "bd": list(t_bd)}
    return GadgetKit(h, g, na, nb, "asteroid", witness, cfg.cap)


def _walks_into(h, starts, t, max_len):
    from .structure import find_avoiding_walks
    try:
        return find_avoiding_walks(h, starts, set(t), max_len)
    except BoundExceeded:
        return None


def _pick_walks(h, triples, gadgets, max_len):
    """First gadget (lex order) with walks for both Q; a shared triple wins."""
    for g in gadgets:
        ace = {t: _walks_into(h, g.ace, t, max_len) for t in triples}
        bd = {t: _walks_into(h, g.bd, t, max_len) for t in triples}
        for t in triples:
            if ace[t] and bd[t]:
                return g, (t, ace[t]), (t, bd[t])
        ta = next((t for t in triples if ace[t]), None)
        tb = next((t for t in triples if bd[t]), None)
        if ta and tb:
            return g, (ta, ace[ta]), (tb, bd[tb])
    return None
