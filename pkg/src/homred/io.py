"""JSON formats. Every document carries ``"format": "homred/1"``.

Serialization is canonical (sorted keys, fixed indentation) so equal values
give byte-identical text.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .errors import InvalidArgument
from .gadgets import DistinguishedInstance
from .graph import Graph, builtin
from .solver import COLOR_NAMES, AnnotatedP4Instance, CliqueInstance, ListHomInstance
from .structure import HardnessReport

FORMAT = "homred/1"


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def loads(text: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"json: {exc.msg} at line {exc.lineno}") from None
    check_format(doc)
    return doc


def check_format(doc: Any) -> None:
    if isinstance(doc, dict) and "format" in doc and doc["format"] != FORMAT:
        raise InvalidArgument(f"format: unknown version {doc['format']!r}")


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise InvalidArgument(f"{where}: expected an object")
    if key not in doc:
        raise InvalidArgument(f"{where}.{key}: missing")
    return doc[key]


# -- graphs -------------------------------------------------------------------------

def graph_to_json(g: Graph) -> dict:
    out = {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}
    if g.labels:
        out["labels"] = {str(v): g.labels[v] for v in sorted(g.labels)}
    return out


def graph_from_json(x: Any, where: str = "graph") -> Graph:
    if isinstance(x, str):
        try:
            return builtin(x)
        except InvalidArgument as exc:
            raise InvalidArgument(f"{where}: {exc}") from None
    n = _field(x, "n", where)
    edges = _field(x, "edges", where)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InvalidArgument(f"{where}.n: expected a non-negative integer")
    if not isinstance(edges, list):
        raise InvalidArgument(f"{where}.edges: expected a list")
    pairs = []
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            raise InvalidArgument(f"{where}.edges[{i}]: expected [u, v]")
        pairs.append(tuple(e))
    labels = x.get("labels")
    if labels is not None:
        if not isinstance(labels, dict):
            raise InvalidArgument(f"{where}.labels: expected an object")
        try:
            labels = {int(k): str(v) for k, v in labels.items()}
        except ValueError:
            raise InvalidArgument(f"{where}.labels: keys must be vertex indices") from None
    try:
        return Graph.from_edges(n, pairs, labels)
    except InvalidArgument as exc:
        raise InvalidArgument(f"{where}.edges: {exc}") from None


# -- list homomorphism instances ---------------------------------------------------------

def _lists_to_json(lists, name=None) -> dict:
    conv = name or (lambda x: x)
    return {str(v): [conv(x) for x in sorted(l)] for v, l in enumerate(lists)}


def _lists_from_json(raw: Any, n: int, resolve, default, where: str) -> tuple:
    if not isinstance(raw, dict):
        raise InvalidArgument(f"{where}: expected an object")
    out = [default] * n
    for key, vals in raw.items():
        try:
            v = int(key)
        except ValueError:
            raise InvalidArgument(f"{where}[{key!r}]: not a vertex index") from None
        if not 0 <= v < n:
            raise InvalidArgument(f"{where}[{key}]: vertex out of range")
        if not isinstance(vals, list):
            raise InvalidArgument(f"{where}[{key}]: expected a list")
        try:
            out[v] = frozenset(resolve(x) for x in vals)
        except InvalidArgument as exc:
            raise InvalidArgument(f"{where}[{key}]: {exc}") from None
    return tuple(out)


def listhom_to_json(inst: ListHomInstance) -> dict:
    return {"format": FORMAT, "kind": "list-hom", "target": graph_to_json(inst.target),
            "guest": graph_to_json(inst.guest), "lists": _lists_to_json(inst.lists)}


def listhom_from_json(doc: dict) -> ListHomInstance:
    check_format(doc)
    target = graph_from_json(_field(doc, "target", "instance"), "target")
    guest = graph_from_json(_field(doc, "guest", "instance"), "guest")
    full = frozenset(range(target.n))
    lists = _lists_from_json(doc.get("lists", {}), guest.n, target.index_of, full, "lists")
    try:
        return ListHomInstance(guest, target, lists)
    except InvalidArgument as exc:
        raise InvalidArgument(f"instance: {exc}") from None


def _colour(x: Any) -> int:
    if isinstance(x, str) and x in COLOR_NAMES:
        return COLOR_NAMES.index(x)
    raise InvalidArgument(f"colour {x!r} is not one of a,b,c,d")


def annotated_to_json(a: AnnotatedP4Instance) -> dict:
    return {"format": FORMAT, "kind": "annotated-p4", "target": "P4",
            "guest": graph_to_json(a.guest),
            "lists": _lists_to_json(a.lists, lambda x: COLOR_NAMES[x]),
            "partition": [sorted(a.v1), sorted(a.v2)],
            "S": [sorted(s) for s in a.s_sequence],
            "F": [list(p) for p in sorted(a.f_pairs)]}


def annotated_from_json(doc: dict) -> AnnotatedP4Instance:
    check_format(doc)
    guest = graph_from_json(_field(doc, "guest", "instance"), "guest")
    part = _field(doc, "partition", "instance")
    if not (isinstance(part, list) and len(part) == 2):
        raise InvalidArgument("partition: expected [[V1...], [V2...]]")
    lists = _lists_from_json(_field(doc, "lists", "instance"), guest.n, _colour,
                             frozenset(), "lists")
    s_raw = doc.get("S", [])
    f_raw = doc.get("F", [])
    if not isinstance(s_raw, list) or not all(isinstance(s, list) for s in s_raw):
        raise InvalidArgument("S: expected a list of vertex lists")
    if not isinstance(f_raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in f_raw):
        raise InvalidArgument("F: expected a list of [u, v] pairs")
    return AnnotatedP4Instance(guest, frozenset(part[0]), frozenset(part[1]), lists,
                               tuple(frozenset(s) for s in s_raw),
                               frozenset(tuple(p) for p in f_raw))


def instance_from_json(doc: dict):
    """Annotated if it carries a partition, plain list-hom otherwise."""
    if isinstance(doc, dict) and "partition" in doc:
        return annotated_from_json(doc)
    return listhom_from_json(doc)


def assignment_to_json(inst, f) -> dict:
    if isinstance(inst, AnnotatedP4Instance):
        return {str(v): COLOR_NAMES[x] for v, x in enumerate(f)}
    return {str(v): x for v, x in enumerate(f)}


# -- gadgets, reports, batches ---------------------------------------------------------------

def gadget_to_json(d: DistinguishedInstance) -> dict:
    doc = listhom_to_json(d.instance)
    doc.update({"kind": "gadget", "distinguished": list(d.distinguished),
                "semantics": sorted(list(t) for t in d.semantics),
                "verified": d.verified, "provenance": d.provenance})
    return doc


def gadget_from_json(doc: dict) -> DistinguishedInstance:
    inst = listhom_from_json(doc)
    dist = _field(doc, "distinguished", "gadget")
    sem = _field(doc, "semantics", "gadget")
    if not isinstance(dist, list) or not isinstance(sem, list):
        raise InvalidArgument("gadget: distinguished and semantics must be lists")
    return DistinguishedInstance(inst, tuple(dist), frozenset(tuple(t) for t in sem),
                                 bool(doc.get("verified", False)), dict(doc.get("provenance", {})))


def report_to_json(r: HardnessReport, target: Optional[Graph] = None) -> dict:
    doc = {"format": FORMAT, "kind": "hardness-report"}
    doc.update(r.to_json())
    if target is not None:
        doc["target"] = graph_to_json(target)
    return doc


def report_from_json(doc: dict) -> HardnessReport:
    check_format(doc)
    return HardnessReport(_field(doc, "verdict", "report"), doc.get("witness"),
                          dict(doc.get("bounds", {})), doc.get("route", "direct"),
                          list(doc.get("notes", [])))


def batch_to_json(instances) -> dict:
    return {"format": FORMAT, "kind": "clique-batch", "n": instances[0].graph.n,
            "k": instances[0].k, "instances": [graph_to_json(ci.graph) for ci in instances]}


def batch_from_json(doc: dict) -> list:
    check_format(doc)
    n = _field(doc, "n", "batch")
    k = _field(doc, "k", "batch")
    raw = _field(doc, "instances", "batch")
    if not isinstance(n, int) or not isinstance(k, int) or k < 1:
        raise InvalidArgument("batch: n and k must be integers, k >= 1")
    if not isinstance(raw, list) or not raw:
        raise InvalidArgument("batch.instances: expected a non-empty list")
    out = []
    for i, g in enumerate(raw):
        graph = graph_from_json(g, f"instances[{i}]")
        if graph.n != n:
            raise InvalidArgument(f"instances[{i}]: has {graph.n} vertices, batch says n={n}")
        out.append(CliqueInstance(graph, k))
    return out


def read_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InvalidArgument(f"input: cannot read {path}: {exc.strerror}") from None


def write_json(path: str, doc: Any) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc))
