"""Structure of target graphs: H*, consistency, and hardness witnesses.

Witness searches are exhaustive within their bounds and deterministic:
orders and lengths are tried smallest first, tuples lexicographically,
paths are BFS-shortest with ties broken by vertex index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .errors import BoundExceeded, InvalidArgument
from .graph import (Bipartition, Graph, are_anticomplete, bits, connected_components,
                    find_bipartition, induced_subgraph, is_connected, is_induced_path,
                    mask_of, neighborhoods_pairwise_incomparable)
from .solver import ListHomInstance

DEFAULT_MAX_ORDER = 7
DEFAULT_CYCLE_LIMIT = 16


# -- associated bipartite graph --------------------------------------------

@dataclass(frozen=True)
class AssociatedBipartite:
    h: Graph
    hstar: Graph

    def prime_of(self, x: int) -> int:
        return x

    def double_prime_of(self, x: int) -> int:
        return self.h.n + x

    def origin(self, y: int) -> int:
        """H vertex a vertex of H* is a copy of."""
        return y % self.h.n


def associated_bipartite(h: Graph) -> AssociatedBipartite:
    """x' is vertex x, x'' is vertex n+x; x'y'' is an edge iff xy is."""
    n = h.n
    edges = set()
    for x, y in h.edges:
        edges.add((x, n + y))
        edges.add((y, n + x))
    labels = {x: f"{h.label(x)}'" for x in range(n)}
    labels.update({n + x: f"{h.label(x)}''" for x in range(n)})
    return AssociatedBipartite(h, Graph.from_edges(2 * n, edges, labels))


# -- consistency -----------------------------------------------------------

def target_sides(h: Graph) -> Bipartition:
    if not is_connected(h):
        raise InvalidArgument("target: must be connected for consistency")
    bp = find_bipartition(h)
    if bp is None:
        raise InvalidArgument("target: must be bipartite for consistency")
    return bp


def is_consistent_instance(inst: ListHomInstance) -> Optional[Bipartition]:
    """Guest bipartition (A, B) with A-lists inside X and B-lists inside Y."""
    sides = target_sides(inst.target)
    x_side, y_side = sides.side_a, sides.side_b
    g = inst.guest
    bp = find_bipartition(g)
    if bp is None:
        return None
    side_a, side_b = set(), set()
    for comp in connected_components(g):
        for flip in (False, True):
            ok = True
            for v in comp:
                in_a = (v in bp.side_a) != flip
                if not inst.lists[v] <= (x_side if in_a else y_side):
                    ok = False
                    break
            if ok:
                for v in comp:
                    ((side_a if (v in bp.side_a) != flip else side_b)).add(v)
                break
        else:
            return None
    return Bipartition(frozenset(side_a), frozenset(side_b))


# -- induced cycles ----------------------------------------------------------

def _induced_cycle_of_length(h: Graph, length: int, allowed: int) -> Optional[list]:
    for s in bits(allowed):
        # s is the smallest vertex on the cycle
        higher = allowed & ~((1 << (s + 1)) - 1)
        path = [s]

        def extend(path, blocked):
            last = path[-1]
            if len(path) == length:
                return path if h.has_edge(last, s) else None
            cands = h.adj[last] & higher & ~blocked
            for w in bits(cands):
                if h.adj[w] & mask_of(path[1:-1]):
                    continue
                if len(path) > 1 and h.has_edge(w, s) and len(path) + 1 < length:
                    continue
                res = extend(path + [w], blocked | (1 << w))
                if res:
                    return res
            return None
        res = extend(path, 1 << s)
        if res:
            return res
    return None


def find_long_induced_cycle(h: Graph, min_len: int = 6,
                            vertex_limit: int = DEFAULT_CYCLE_LIMIT) -> Optional[list]:
    """Shortest induced cycle with at least ``min_len`` vertices.

    Looped vertices never lie on a returned cycle.
    """
    if h.n > vertex_limit:
        raise BoundExceeded(f"cycle search limited to {vertex_limit} vertices, "
                            f"graph has {h.n}", limit=vertex_limit)
    allowed = mask_of(v for v in range(h.n) if not h.has_loop(v))
    for length in range(max(min_len, 3), h.n + 1):
        cyc = _induced_cycle_of_length(h, length, allowed)
        if cyc:
            return cyc
    return None


def is_induced_cycle(h: Graph, cyc: Sequence[int]) -> bool:
    k = len(cyc)
    if k < 3 or len(set(cyc)) != k:
        return False
    for i in range(k):
        for j in range(i, k):
            adjacent = (j - i) in (1, k - 1)
            if h.has_edge(cyc[i], cyc[j]) != adjacent:
                return False
    return True


# -- asteroids ---------------------------------------------------------------

@dataclass(frozen=True)
class AsteroidWitness:
    u_seq: tuple
    v_seq: tuple
    paths: tuple  # paths[i] runs from u_i to u_{i+1}

    @property
    def order(self) -> int:
        return len(self.u_seq)

    @property
    def k(self) -> int:
        return (self.order - 1) // 2


def _bfs_path(h: Graph, src: int, dst: int, allowed: int) -> Optional[list]:
    if not (allowed >> src & 1 and allowed >> dst & 1):
        return None
    prev = {src: None}
    q = deque([src])
    while q:
        x = q.popleft()
        if x == dst:
            out = []
            while x is not None:
                out.append(x)
                x = prev[x]
            return out[::-1]
        for y in bits(h.adj[x] & allowed):
            if y not in prev:
                prev[y] = x
                q.append(y)
    return None


def _closed_nbhd(h: Graph, vs) -> int:
    m = 0
    for v in vs:
        m |= h.adj[v] | (1 << v)
    return m


def _asteroids_of_order(h: Graph, order: int, u_side: int, full: int) -> Iterator[AsteroidWitness]:
    k = (order - 1) // 2
    edges = sorted((u, v) for u in bits(u_side) for v in bits(h.adj[u]))
    us: list = [None] * order
    vs: list = [None] * order
    paths: list = [None] * order

    def forbidden_for_path(m):
        # vertices P_{m,m+1} must avoid
        j = (m - k) % order
        f = _closed_nbhd(h, (us[j], vs[j]))
        if 1 <= m <= 2 * k - 1:
            f |= _closed_nbhd(h, (us[0], vs[0]))
        return f

    def checks_at(i):
        """Constraints that become checkable once index i is placed."""
        placed = set(range(i + 1))
        # (a) {u_j,v_j} vs {v_{j+k}, v_{j+k+1}}
        for j in range(order):
            others = ((j + k) % order, (j + k + 1) % order)
            if i in (j,) + others and all(x in placed for x in (j,) + others):
                nb = h.adj[us[j]] | h.adj[vs[j]]
                if any(nb >> vs[o] & 1 for o in others):
                    return False
        # (b) {u_0,v_0} vs v_1..v_2k
        if i >= 1:
            nb = h.adj[us[0]] | h.adj[vs[0]]
            if nb >> vs[i] & 1:
                return False
        # paths whose data is now complete
        for m in range(order):
            j = (m - k) % order
            need = {m, (m + 1) % order, j}
            if 1 <= m <= 2 * k - 1:
                need.add(0)
            if i in need and need <= placed:
                p = _bfs_path(h, us[m], us[(m + 1) % order], full & ~forbidden_for_path(m))
                if p is None:
                    return False
                paths[m] = p
        return True

    def rec(i):
        if i == order:
            yield AsteroidWitness(tuple(us), tuple(vs), tuple(tuple(p) for p in paths))
            return
        for u, v in edges:
            if u in us[:i] or v in vs[:i]:
                continue
            us[i], vs[i] = u, v
            if checks_at(i):
                yield from rec(i + 1)
        us[i] = vs[i] = None

    yield from rec(0)


def iter_asteroids(h: Graph, max_order: int = DEFAULT_MAX_ORDER) -> Iterator[AsteroidWitness]:
    bp = _require_bipartite(h)
    full = (1 << h.n) - 1
    for order in range(3, max_order + 1, 2):
        for side in (bp.side_a, bp.side_b):
            yield from _asteroids_of_order(h, order, mask_of(side), full)


def _require_bipartite(h: Graph) -> Bipartition:
    if h.loops():
        raise InvalidArgument("asteroid search needs a loop-free graph")
    bp = find_bipartition(h)
    if bp is None:
        raise InvalidArgument("asteroid search needs a bipartite graph")
    return bp


def find_asteroid(h: Graph, max_order: int = DEFAULT_MAX_ORDER) -> Optional[AsteroidWitness]:
    if max_order < 3 or max_order % 2 == 0:
        raise InvalidArgument("max_order must be an odd integer >= 3")
    for w in iter_asteroids(h, max_order):
        if not verify_asteroid(h, w):
            raise AssertionError("asteroid search emitted an invalid witness")
        return w
    return None


def verify_asteroid(h: Graph, w: AsteroidWitness) -> bool:
    """Direct re-check of every asteroid condition."""
    order = len(w.u_seq)
    if order < 3 or order % 2 == 0 or len(w.v_seq) != order or len(w.paths) != order:
        return False
    k = (order - 1) // 2
    u, v = list(w.u_seq), list(w.v_seq)
    if len(set(u)) != order or len(set(v)) != order:
        return False
    if any(not (0 <= x < h.n) for x in u + v):
        return False
    if any(not h.has_edge(u[i], v[i]) for i in range(order)):
        return False
    bp = find_bipartition(h)
    if bp is None or h.loops():
        return False
    su = {bp.side_of(x) for x in u}
    sv = {bp.side_of(x) for x in v}
    if len(su) != 1 or len(sv) != 1 or su == sv:
        return False
    for i, p in enumerate(w.paths):
        p = list(p)
        if not p or p[0] != u[i] or p[-1] != u[(i + 1) % order]:
            return False
        if len(set(p)) != len(p) or any(not (0 <= x < h.n) for x in p):
            return False
        if any(not h.has_edge(p[t], p[t + 1]) for t in range(len(p) - 1)):
            return False
    for i in range(order):
        a, b = (i + k) % order, (i + k + 1) % order
        if not are_anticomplete(h, {u[i], v[i]}, {v[a], v[b]} | set(w.paths[a])):
            return False
    rest = set(v[1:])
    for i in range(1, 2 * k):
        rest |= set(w.paths[i])
    return are_anticomplete(h, {u[0], v[0]}, rest)


def derive_special_triples(h: Graph, w: AsteroidWitness) -> list:
    """The four triples {u0,u1,u_{k+1}}, {u0,u_2k,u_k} and their v analogues."""
    if not verify_asteroid(h, w):
        raise InvalidArgument("witness does not verify against h")
    k, u, v = w.k, w.u_seq, w.v_seq
    return [(u[0], u[1], u[k + 1]), (u[0], u[2 * k], u[k]),
            (v[0], v[1], v[k + 1]), (v[0], v[2 * k], v[k])]


# -- extended P4 gadgets ---------------------------------------------------

@dataclass(frozen=True)
class ExtendedP4Gadget:
    a: int
    b: int
    c: int
    d: int
    e: int

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c, self.d, self.e)

    @property
    def ace(self) -> tuple:
        return (self.a, self.c, self.e)

    @property
    def bd(self) -> tuple:
        return (self.b, self.d)


def is_extended_p4(h: Graph, g) -> bool:
    a, b, c, d, e = g.as_tuple() if isinstance(g, ExtendedP4Gadget) else g
    if len({a, b, c, d, e}) != 5:
        return False
    return (is_induced_path(h, (a, b, c, d))
            and neighborhoods_pairwise_incomparable(h, (a, c, e))
            and neighborhoods_pairwise_incomparable(h, (b, d)))


def iter_extended_p4(h: Graph) -> Iterator[ExtendedP4Gadget]:
    """All extended P4 gadgets in lexicographic tuple order."""
    n = h.n
    for a in range(n):
        for b in bits(h.adj[a]):
            if b == a:
                continue
            for c in bits(h.adj[b]):
                if c in (a, b):
                    continue
                for d in bits(h.adj[c]):
                    if d in (a, b, c):
                        continue
                    if not is_induced_path(h, (a, b, c, d)):
                        continue
                    if not neighborhoods_pairwise_incomparable(h, (b, d)):
                        continue
                    if not neighborhoods_pairwise_incomparable(h, (a, c)):
                        continue
                    for e in range(n):
                        if e in (a, b, c, d):
                            continue
                        if neighborhoods_pairwise_incomparable(h, (a, c, e)):
                            yield ExtendedP4Gadget(a, b, c, d, e)


def find_extended_p4(h: Graph) -> Optional[ExtendedP4Gadget]:
    return next(iter_extended_p4(h), None)


# -- avoiding walks --------------------------------------------------------

@dataclass(frozen=True)
class AvoidingWalks:
    walks: tuple  # equal-length vertex sequences

    @property
    def length(self) -> int:
        return len(self.walks[0]) - 1

    @property
    def starts(self) -> tuple:
        return tuple(w[0] for w in self.walks)

    @property
    def ends(self) -> tuple:
        return tuple(w[-1] for w in self.walks)

    def end_assignment(self) -> dict:
        return dict(zip(self.starts, self.ends))


def walks_avoid(h: Graph, p: Sequence[int], q: Sequence[int]) -> bool:
    if len(p) != len(q) or p[0] == q[0]:
        return False
    return all(not h.has_edge(p[i], q[i + 1]) and not h.has_edge(q[i], p[i + 1])
               for i in range(len(p) - 1))


def is_walk(h: Graph, p: Sequence[int]) -> bool:
    return len(p) >= 1 and all(h.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1))


def verify_avoiding_walks(h: Graph, w: AvoidingWalks) -> bool:
    walks = [list(x) for x in w.walks]
    if not walks or len({len(x) for x in walks}) != 1:
        return False
    if not all(is_walk(h, x) for x in walks):
        return False
    return all(walks_avoid(h, walks[i], walks[j])
               for i in range(len(walks)) for j in range(i + 1, len(walks)))


def find_avoiding_walks(h: Graph, starts: Sequence[int], target_set, max_len: int) -> Optional[AvoidingWalks]:
    """Shortest pairwise-avoiding walks from ``starts`` into distinct ``target_set`` members.

    Breadth-first over tuples of current positions. Returns None when the
    reachable tuple space is exhausted; raises BoundExceeded when tuples are
    still being discovered at ``max_len``.
    """
    starts = tuple(starts)
    if len(set(starts)) != len(starts):
        raise InvalidArgument("starts must be distinct")
    if len(starts) not in (2, 3):
        raise InvalidArgument("starts must have 2 or 3 vertices")
    target = frozenset(target_set)
    if len(target) < len(starts):
        raise InvalidArgument("target_set smaller than starts")
    m = len(starts)

    def is_goal(state):
        return all(x in target for x in state) and len(set(state)) == m

    prev = {starts: None}
    frontier = [starts]
    depth = 0
    while frontier:
        for state in frontier:
            if is_goal(state):
                seq = []
                while state is not None:
                    seq.append(state)
                    state = prev[state]
                seq.reverse()
                return AvoidingWalks(tuple(tuple(s[j] for s in seq) for j in range(m)))
        if depth == max_len:
            raise BoundExceeded(f"no avoiding walks of length <= {max_len}", limit=max_len)
        nxt = []
        for state in frontier:
            for cand in _avoiding_successors(h, state):
                if cand not in prev:
                    prev[cand] = state
                    nxt.append(cand)
        frontier = nxt
        depth += 1
    return None


def _avoiding_successors(h: Graph, state):
    m = len(state)
    # p'_j must avoid the neighbourhoods of every other p_j'
    options = []
    for j in range(m):
        others = 0
        for jj in range(m):
            if jj != j:
                others |= h.adj[state[jj]]
        options.append(bits(h.adj[state[j]] & ~others))

    def rec(j, acc):
        if j == m:
            yield tuple(acc)
            return
        for x in options[j]:
            yield from rec(j + 1, acc + [x])

    yield from rec(0, [])


# -- classification ----------------------------------------------------------

NP_COMPLETE = "NP-complete"
NO_WITNESS = "no-witness-within-bounds"
POLY_CONVENTION = "poly-by-convention"


@dataclass
class HardnessReport:
    verdict: str
    witness: Optional[dict]
    bounds: dict
    route: str = "direct"  # or "hstar"
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "route": self.route, "witness": self.witness,
                "bounds": dict(self.bounds), "notes": list(self.notes)}


def bipartite_object(h: Graph) -> tuple[Graph, Optional[AssociatedBipartite]]:
    """``h`` itself when loop-free bipartite, otherwise its H*."""
    if not h.loops() and find_bipartition(h) is not None:
        return h, None
    assoc = associated_bipartite(h)
    return assoc.hstar, assoc


def classify_hardness(h: Graph, max_order: int = DEFAULT_MAX_ORDER,
                      cycle_vertex_limit: int = DEFAULT_CYCLE_LIMIT) -> HardnessReport:
    """Search for an induced cycle on >= 6 vertices, then an asteroid.

    The search runs per connected component of ``h`` (or of H* when ``h``
    has loops or is not bipartite). Absence of a witness is only reported
    relative to the bounds; it is never turned into a polynomiality claim
    except for edgeless targets.
    """
    bounds = {"max_order": max_order, "cycle_vertex_limit": cycle_vertex_limit}
    obj, assoc = bipartite_object(h)
    route = "direct" if assoc is None else "hstar"
    report = HardnessReport(NO_WITNESS, None, bounds, route)
    if not h.edges:
        report.verdict = POLY_CONVENTION
        report.notes.append("edgeless target")
        return report
    for comp in connected_components(obj):
        if len(comp) < 6:
            continue
        sub, index = induced_subgraph(obj, comp)
        try:
            cyc = find_long_induced_cycle(sub, 6, cycle_vertex_limit)
        except BoundExceeded as exc:
            report.notes.append(f"component {comp[0]}: {exc}")
            cyc = None
            bounds["cycle_search_complete"] = False
        if cyc:
            report.verdict = NP_COMPLETE
            report.witness = {"kind": "cycle", "vertices": [index[x] for x in cyc]}
            return report
        ast = find_asteroid(sub, max_order)
        if ast:
            report.verdict = NP_COMPLETE
            report.witness = {
                "kind": "asteroid",
                "u": [index[x] for x in ast.u_seq],
                "v": [index[x] for x in ast.v_seq],
                "paths": [[index[x] for x in p] for p in ast.paths],
            }
            return report
    return report


def witness_from_json(obj: Graph, witness: dict):
    if witness["kind"] == "cycle":
        return list(witness["vertices"])
    return AsteroidWitness(tuple(witness["u"]), tuple(witness["v"]),
                           tuple(tuple(p) for p in witness["paths"]))


def verify_report_witness(h: Graph, report: HardnessReport) -> bool:
    """Re-check a report's witness against ``h`` (or its H*)."""
    if report.witness is None:
        return report.verdict != NP_COMPLETE
    obj, _ = bipartite_object(h)
    w = witness_from_json(obj, report.witness)
    if isinstance(w, list):
        return len(w) >= 6 and is_induced_cycle(obj, w)
    return verify_asteroid(obj, w)
