"""Exact engines: list homomorphism, annotated P4 colouring, clique.

The list-homomorphism engine keeps every domain as a bitmask over the
target's vertices. Binary edge constraints are made arc consistent by
intersecting a domain with the union of target neighbourhoods of the other
endpoint's domain; that test is exact for a binary relation given by an
adjacency relation, so no per-value support lists are needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import InvalidArgument
from .graph import Graph, bits, connected_components, find_bipartition, mask_of, p4

Assignment = tuple  # guest vertex index -> target vertex index

# canonical P4 colours
A, B, C, D = 0, 1, 2, 3
COLOR_NAMES = "abcd"
P4 = p4()


@dataclass(frozen=True)
class ListHomInstance:
    guest: Graph
    target: Graph
    lists: tuple  # tuple of frozensets, one per guest vertex

    def __post_init__(self):
        lists = tuple(frozenset(l) for l in self.lists)
        object.__setattr__(self, "lists", lists)
        if len(lists) != self.guest.n:
            raise InvalidArgument(
                f"lists: expected {self.guest.n} entries, got {len(lists)}")
        if self.guest.loops():
            raise InvalidArgument("guest: must be loop-free")
        for v, l in enumerate(lists):
            for x in l:
                if not (isinstance(x, int) and 0 <= x < self.target.n):
                    raise InvalidArgument(f"lists[{v}]: {x!r} is not a target vertex")

    @classmethod
    def full_lists(cls, guest: Graph, target: Graph) -> "ListHomInstance":
        return cls(guest, target, tuple(frozenset(range(target.n)) for _ in range(guest.n)))


@dataclass(frozen=True)
class AnnotatedP4Instance:
    """List P4-colouring plus "not all c" sets and disequality pairs."""

    guest: Graph
    v1: frozenset
    v2: frozenset
    lists: tuple
    s_sequence: tuple = ()
    f_pairs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "v1", frozenset(self.v1))
        object.__setattr__(self, "v2", frozenset(self.v2))
        object.__setattr__(self, "lists", tuple(frozenset(l) for l in self.lists))
        object.__setattr__(self, "s_sequence", tuple(frozenset(s) for s in self.s_sequence))
        pairs = set()
        for p in self.f_pairs:
            u, v = sorted(p)
            pairs.add((u, v))
        object.__setattr__(self, "f_pairs", frozenset(pairs))
        self._validate()

    def _validate(self):
        g = self.guest
        n = g.n
        if g.loops():
            raise InvalidArgument("guest: must be simple (loop found)")
        if self.v1 & self.v2 or (self.v1 | self.v2) != frozenset(range(n)):
            raise InvalidArgument("partition: sides must partition the vertex set")
        for u, v in g.edges:
            if (u in self.v1) == (v in self.v1):
                raise InvalidArgument(f"partition: edge {u}-{v} inside one side")
        if len(self.lists) != n:
            raise InvalidArgument(f"lists: expected {n} entries, got {len(self.lists)}")
        for v, l in enumerate(self.lists):
            allowed = {A, C} if v in self.v1 else {B, D}
            if not l <= allowed:
                raise InvalidArgument(f"lists[{v}]: colours outside {sorted(allowed)}")
        total = 0
        for i, s in enumerate(self.s_sequence):
            if not s <= self.v1:
                raise InvalidArgument(f"S[{i}]: must be a subset of V1")
            total += len(s)
        if total > 3 * n:
            raise InvalidArgument(f"sum_S_le_3V: sum |S_i| = {total} > 3*{n}")
        if len(self.f_pairs) > n:
            raise InvalidArgument(f"F_le_V: |F| = {len(self.f_pairs)} > {n}")
        for u, v in self.f_pairs:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise InvalidArgument(f"F: bad pair {u},{v}")
            if (u in self.v1) != (v in self.v1):
                raise InvalidArgument(f"F: pair {u},{v} crosses the partition")

    def as_list_hom(self) -> ListHomInstance:
        """Drop the annotations."""
        return ListHomInstance(self.guest, P4, self.lists)


@dataclass(frozen=True)
class CliqueInstance:
    graph: Graph
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgument("k: must be positive")
        if self.graph.loops():
            raise InvalidArgument("graph: clique instances must be loop-free")

    @property
    def trivially_no(self) -> bool:
        return self.k > self.graph.n


# -- search engine ---------------------------------------------------------

class _Engine:
    """MAC backtracking over bitmask domains.

    ``forbid_all`` entries are (vertex mask list, value) meaning "not every
    vertex of the set takes ``value``"; ``diseq`` pairs must differ.
    """

    def __init__(self, guest: Graph, target: Graph, domains: Sequence[int],
                 diseq: Iterable = (), forbid_all: Iterable = (), propagate: bool = True):
        self.n = guest.n
        self.gadj = [bits(guest.adj[v]) for v in range(guest.n)]
        self.tadj = target.adj
        self.dom = list(domains)
        self.propagate_on = propagate
        self._nu_cache: dict = {}
        self.diseq_of = [[] for _ in range(self.n)]
        for u, v in diseq:
            self.diseq_of[u].append(v)
            self.diseq_of[v].append(u)
        self.sets = [(list(s), val) for s, val in forbid_all]
        self.sets_of = [[] for _ in range(self.n)]
        for i, (s, _) in enumerate(self.sets):
            for v in s:
                self.sets_of[v].append(i)
        self.trail: list = []
        self.nodes = 0

    def nu(self, mask: int) -> int:
        r = self._nu_cache.get(mask)
        if r is None:
            r = 0
            for x in bits(mask):
                r |= self.tadj[x]
            self._nu_cache[mask] = r
        return r

    def _set(self, v: int, new: int) -> None:
        self.trail.append((v, self.dom[v]))
        self.dom[v] = new

    def _undo(self, mark: int) -> None:
        trail, dom = self.trail, self.dom
        while len(trail) > mark:
            v, old = trail.pop()
            dom[v] = old

    def propagate(self, queue: list) -> bool:
        dom = self.dom
        inq = set(queue)
        while queue:
            v = queue.pop()
            inq.discard(v)
            dv = dom[v]
            if not dv:
                return False
            support = self.nu(dv)
            for w in self.gadj[v]:
                new = dom[w] & support
                if new != dom[w]:
                    if not new:
                        return False
                    self._set(w, new)
                    if w not in inq:
                        inq.add(w)
                        queue.append(w)
            if dv & (dv - 1) == 0:
                for w in self.diseq_of[v]:
                    if dom[w] & dv:
                        new = dom[w] & ~dv
                        if not new:
                            return False
                        self._set(w, new)
                        if w not in inq:
                            inq.add(w)
                            queue.append(w)
            for i in self.sets_of[v]:
                s, val = self.sets[i]
                vbit = 1 << val
                free = None
                nfree = 0
                for u in s:
                    if dom[u] != vbit:
                        nfree += 1
                        free = u
                        if nfree > 1:
                            break
                if nfree == 0:
                    return False
                if nfree == 1 and dom[free] & vbit:
                    new = dom[free] & ~vbit
                    if not new:
                        return False
                    self._set(free, new)
                    if free not in inq:
                        inq.add(free)
                        queue.append(free)
        return True

    def consistent_with_assigned(self, v: int, x: int, assigned: list) -> bool:
        """Plain check used when propagation is disabled."""
        adj = self.tadj[x]
        for w in self.gadj[v]:
            y = assigned[w]
            if y is not None and not (adj >> y & 1):
                return False
        for w in self.diseq_of[v]:
            if assigned[w] == x:
                return False
        for i in self.sets_of[v]:
            s, val = self.sets[i]
            if x == val and all(assigned[u] == val for u in s if u != v):
                return False
        return True

    def solve(self) -> Optional[tuple]:
        if any(d == 0 for d in self.dom):
            return None
        if not self.propagate_on:
            return self._solve_plain()
        if not self.propagate(list(range(self.n))):
            return None
        return self._solve_mac()

    def _pick(self) -> int:
        best, best_size = -1, 1 << 30
        for v, d in enumerate(self.dom):
            if d & (d - 1):
                size = bin(d).count("1")
                if size < best_size:
                    best, best_size = v, size
                    if size == 2:
                        break
        return best

    def _solve_mac(self) -> Optional[tuple]:
        # explicit stack of (var, remaining values, trail mark)
        stack = []
        v = self._pick()
        if v < 0:
            return self._result()
        stack.append([v, bits(self.dom[v]), len(self.trail)])
        while stack:
            frame = stack[-1]
            v, values, mark = frame
            self._undo(mark)
            if not values:
                stack.pop()
                continue
            x = values.pop(0)
            self.nodes += 1
            self._set(v, 1 << x)
            if not self.propagate([v]):
                continue
            nxt = self._pick()
            if nxt < 0:
                return self._result()
            stack.append([nxt, bits(self.dom[nxt]), len(self.trail)])
        return None

    def _solve_plain(self) -> Optional[tuple]:
        order = sorted(range(self.n), key=lambda v: (bin(self.dom[v]).count("1"), v))
        assigned: list = [None] * self.n
        choices = [bits(self.dom[v]) for v in range(self.n)]
        idx = [0] * self.n
        pos = 0
        while 0 <= pos < len(order):
            v = order[pos]
            placed = False
            while idx[pos] < len(choices[v]):
                x = choices[v][idx[pos]]
                idx[pos] += 1
                self.nodes += 1
                if self.consistent_with_assigned(v, x, assigned):
                    assigned[v] = x
                    placed = True
                    break
            if placed:
                pos += 1
                if pos < len(order):
                    idx[pos] = 0
            else:
                assigned[v] = None
                idx[pos] = 0
                pos -= 1
                if pos >= 0:
                    assigned[order[pos]] = None
        if pos < 0:
            return None
        return tuple(assigned)

    def _result(self) -> tuple:
        return tuple(d.bit_length() - 1 for d in self.dom)


def solve_list_hom(inst: ListHomInstance, propagate: bool = True) -> Optional[Assignment]:
    """Find a list homomorphism, or None.

    Arc consistency is enforced up front and maintained after every
    decision; variables are chosen smallest-domain-first (lowest index on
    ties) and values are tried in ascending order.
    """
    if not isinstance(inst, ListHomInstance):
        raise InvalidArgument("solve_list_hom expects a ListHomInstance")
    doms = [mask_of(l) for l in inst.lists]
    return _Engine(inst.guest, inst.target, doms, propagate=propagate).solve()


def solve_annotated_p4(inst: AnnotatedP4Instance, propagate: bool = True) -> Optional[Assignment]:
    if not isinstance(inst, AnnotatedP4Instance):
        raise InvalidArgument("solve_annotated_p4 expects an AnnotatedP4Instance")
    doms = [mask_of(l) for l in inst.lists]
    sets = [(sorted(s), C) for s in inst.s_sequence]
    for s, _ in sets:
        if not s:
            return None
    eng = _Engine(inst.guest, P4, doms, diseq=inst.f_pairs, forbid_all=sets,
                  propagate=propagate)
    return eng.solve()


# -- brute-force oracle ----------------------------------------------------

@dataclass
class Enumeration:
    assignments: list = field(default_factory=list)
    truncated: bool = False

    def __len__(self):
        return len(self.assignments)

    def __iter__(self):
        return iter(self.assignments)

    def __bool__(self):
        return bool(self.assignments)


def enumerate_all_hom(inst: ListHomInstance, cap: Optional[int] = None) -> Enumeration:
    """All list homomorphisms in lexicographic order, at most ``cap``.

    Plain depth-first product over vertices 0..n-1, rejecting a prefix as
    soon as an edge to an earlier vertex is violated.
    """
    g, h = inst.guest, inst.target
    n = g.n
    earlier = [[u for u in bits(g.adj[v]) if u < v] for v in range(n)]
    lists = [sorted(l) for l in inst.lists]
    out = Enumeration()
    cur = [0] * n

    def rec(v):
        if v == n:
            if cap is not None and len(out.assignments) >= cap:
                out.truncated = True
                return False
            out.assignments.append(tuple(cur))
            return True
        for x in lists[v]:
            if all(h.has_edge(x, cur[u]) for u in earlier[v]):
                cur[v] = x
                if not rec(v + 1):
                    return False
        return True

    rec(0)
    return out


def has_k_clique(inst: CliqueInstance) -> tuple[bool, Optional[frozenset]]:
    """Branch and bound over a degeneracy ordering."""
    g, k = inst.graph, inst.k
    if k > g.n:
        return False, None
    if k == 1:
        return (True, frozenset({0})) if g.n else (False, None)
    # degeneracy order: repeatedly strip a minimum-degree vertex
    remaining = set(range(g.n))
    deg = {v: g.degree(v) for v in remaining}
    order = []
    while remaining:
        v = min(remaining, key=lambda x: (deg[x], x))
        order.append(v)
        remaining.discard(v)
        for w in bits(g.adj[v]):
            if w in remaining:
                deg[w] -= 1
    pos = {v: i for i, v in enumerate(order)}

    def expand(chosen: list, cand: int):
        if len(chosen) == k:
            return list(chosen)
        if len(chosen) + bin(cand).count("1") < k:
            return None
        for w in bits(cand):
            cand &= ~(1 << w)
            res = expand(chosen + [w], cand & g.adj[w])
            if res:
                return res
        return None

    for v in order:
        later = mask_of(w for w in bits(g.adj[v]) if pos[w] > pos[v])
        res = expand([v], later)
        if res:
            return True, frozenset(res)
    return False, None


def brute_force_clique(g: Graph, k: int) -> bool:
    """Subset enumeration; the reference for ``has_k_clique``."""
    if k > g.n:
        return False
    return any(all(g.has_edge(u, v) for u, v in combinations(s, 2))
               for s in combinations(range(g.n), k))


# -- independent re-check --------------------------------------------------

def verify_assignment(inst, f) -> bool:
    """Re-check lists, edges and (for annotated instances) S and F."""
    if f is None:
        return False
    g = inst.guest
    if len(f) != g.n:
        return False
    target = P4 if isinstance(inst, AnnotatedP4Instance) else inst.target
    for v in range(g.n):
        if f[v] not in inst.lists[v]:
            return False
    for u, v in g.edges:
        if not target.has_edge(f[u], f[v]):
            return False
    if isinstance(inst, AnnotatedP4Instance):
        for s in inst.s_sequence:
            if all(f[v] == C for v in s):
                return False
        for u, v in inst.f_pairs:
            if f[u] == f[v]:
                return False
    return True


def annotated_from_lists(guest: Graph, lists, s_sequence=(), f_pairs=()) -> AnnotatedP4Instance:
    """Build an annotated instance, deriving the partition from the lists.

    Vertices with an empty list are placed by the graph's own two-colouring.
    """
    bp = find_bipartition(guest)
    if bp is None:
        raise InvalidArgument("guest: not bipartite")
    v1 = set()
    lists = [frozenset(l) for l in lists]
    # orient each component so that lists agree with the sides
    for comp in connected_components(guest):
        side_a = [v for v in comp if v in bp.side_a]
        flip = any(lists[v] & {B, D} for v in side_a)
        for v in comp:
            in_a = v in bp.side_a
            if in_a != flip:
                v1.add(v)
    v2 = set(range(guest.n)) - v1
    return AnnotatedP4Instance(guest, frozenset(v1), frozenset(v2), tuple(lists),
                               tuple(s_sequence), frozenset(tuple(p) for p in f_pairs))
