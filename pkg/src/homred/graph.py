"""Undirected graphs with optional loops on dense integer vertices.

Adjacency is kept twice: as a set of normalized pairs and as one integer
bitmask per vertex, since nearly every search here is dominated by
adjacency tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import InvalidArgument


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset
    labels: Optional[Mapping[int, str]] = None
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgument("vertex count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = tuple(e) if len(e) == 2 else (tuple(e)[0],) * 2
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidArgument(f"edge {u}-{v} out of range for n={self.n}")
            norm.add(_norm(u, v))
        adj = [0] * self.n
        for u, v in norm:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adj", tuple(adj))
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(self.labels))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels=None) -> "Graph":
        return cls(n, frozenset(_norm(*e) for e in edges), labels)

    # -- basic queries -----------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise InvalidArgument(f"vertex {v!r} out of range for n={self.n}")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def has_loop(self, v: int) -> bool:
        return bool(self.adj[v] >> v & 1)

    def loops(self) -> list[int]:
        return [v for v in range(self.n) if self.has_loop(v)]

    def neighbors(self, v: int) -> frozenset:
        return frozenset(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def label(self, v: int) -> str:
        if self.labels and v in self.labels:
            return self.labels[v]
        return str(v)

    def index_of(self, name) -> int:
        """Resolve a label (or a decimal string / int) to a vertex index."""
        if isinstance(name, int):
            self.check_vertex(name)
            return name
        if self.labels:
            for v, lab in self.labels.items():
                if lab == name:
                    return v
        if isinstance(name, str) and name.isdigit():
            v = int(name)
            self.check_vertex(v)
            return v
        raise InvalidArgument(f"unknown vertex name {name!r}")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __len__(self):
        return self.n


# -- operations ------------------------------------------------------------

def neighborhood(g: Graph, v: int) -> frozenset:
    g.check_vertex(v)
    return g.neighbors(v)


def _check_set(g: Graph, s) -> int:
    for v in s:
        g.check_vertex(v)
    return mask_of(s)


def are_anticomplete(g: Graph, a, b) -> bool:
    """True iff no edge joins a vertex of ``a`` to a vertex of ``b``.

    Overlapping sets containing a looped vertex are not anticomplete.
    """
    _check_set(g, a)
    mb = _check_set(g, b)
    return all(not (g.adj[v] & mb) for v in a)


def induced_subgraph(g: Graph, s) -> tuple[Graph, list[int]]:
    """Subgraph on ``s`` reindexed by ascending original index.

    Returns the graph and the list mapping new index -> old index.
    """
    _check_set(g, s)
    order = sorted(set(s))
    pos = {v: i for i, v in enumerate(order)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    labels = None
    if g.labels:
        labels = {pos[v]: g.labels[v] for v in order if v in g.labels}
    return Graph.from_edges(len(order), edges, labels), order


@dataclass(frozen=True)
class Bipartition:
    side_a: frozenset
    side_b: frozenset

    def side_of(self, v: int) -> int:
        return 0 if v in self.side_a else 1


def find_bipartition(g: Graph) -> Optional[Bipartition]:
    """Two-colour every component (lowest vertex of each on side a).

    Returns None when an odd closed walk exists, loops included.
    """
    color = [-1] * g.n
    for root in range(g.n):
        if color[root] != -1:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for w in bits(g.adj[u]):
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    stack.append(w)
                elif color[w] == color[u]:
                    return None
    a = frozenset(v for v in range(g.n) if color[v] == 0)
    b = frozenset(v for v in range(g.n) if color[v] == 1)
    return Bipartition(a, b)


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp, stack = [], [root]
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in bits(g.adj[u]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def neighborhoods_pairwise_incomparable(g: Graph, s) -> bool:
    """Every vertex of ``s`` has a neighbour that each other one lacks."""
    _check_set(g, s)
    s = list(s)
    for u in s:
        for w in s:
            if u != w and not (g.adj[u] & ~g.adj[w]):
                return False
    return True


def is_induced_path(g: Graph, seq) -> bool:
    """``seq`` spans an induced path in the given order (loops forbidden)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return False
    for i, u in enumerate(seq):
        for j in range(i, len(seq)):
            want = j == i + 1
            if g.has_edge(u, seq[j]) != want:
                return False
    return True


def disjoint_union(*graphs: Graph) -> Graph:
    edges, labels, off = [], {}, 0
    for k, h in enumerate(graphs):
        edges += [(u + off, v + off) for u, v in h.edges]
        for v in range(h.n):
            labels[v + off] = h.label(v) if len(graphs) == 1 else f"{h.label(v)}.{k}"
        off += h.n
    return Graph.from_edges(off, edges, labels)


def relabel(g: Graph, labels: Optional[Mapping[int, str]]) -> Graph:
    return Graph(g.n, g.edges, labels)


# -- builtins --------------------------------------------------------------

def path_graph(n: int, names=None) -> Graph:
    labels = dict(enumerate(names)) if names else {v: f"p{v}" for v in range(n)}
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], labels)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidArgument("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)],
                            {v: f"x{v}" for v in range(n)})


def complete_graph(q: int) -> Graph:
    return Graph.from_edges(q, [(i, j) for i in range(q) for j in range(i + 1, q)],
                            {v: f"k{v}" for v in range(q)})


def reflexive(g: Graph) -> Graph:
    return Graph(g.n, g.edges | {(v, v) for v in range(g.n)}, g.labels)


P4_NAMES = ("a", "b", "c", "d")


def p4() -> Graph:
    return path_graph(4, P4_NAMES)


_CYCLE = re.compile(r"C(\d+)$")
_PATH = re.compile(r"P(\d+)$")
_CLIQUE = re.compile(r"K(?:q:)?(\d+)$")


def builtin(name: str) -> Graph:
    """Resolve a builtin graph name.

    Supported: ``P4`` (labels a..d), ``P<n>``, ``C<n>``, ``K<q>``,
    ``Kq:<q>``, ``reflexive:<name>`` and disjoint unions ``A+B``.
    """
    name = name.strip()
    if name.startswith("reflexive:"):
        return reflexive(builtin(name[len("reflexive:"):]))
    if "+" in name:
        return disjoint_union(*(builtin(part) for part in name.split("+")))
    if name == "P4":
        return p4()
    if m := _PATH.match(name):
        return path_graph(int(m.group(1)))
    if m := _CYCLE.match(name):
        return cycle_graph(int(m.group(1)))
    if m := _CLIQUE.match(name):
        return complete_graph(int(m.group(1)))
    raise InvalidArgument(f"unknown builtin graph {name!r}")
