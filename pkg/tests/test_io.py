import json

import pytest
from hypothesis import given

from homred import io
from homred.errors import InvalidArgument, InvariantViolation
from homred.gadgets import cycle_not_gadget, verify_gadget
from homred.graph import Graph, builtin
from homred.solver import A, B, C, ListHomInstance, annotated_from_lists
from homred.structure import classify_hardness, verify_report_witness

from conftest import list_instances

C6 = builtin("C6")


@given(list_instances(C6, max_n=6))
def test_listhom_round_trip(inst):
    doc = io.listhom_to_json(inst)
    assert doc["format"] == "homred/1"
    back = io.listhom_from_json(io.loads(io.dumps(doc)))
    assert back == inst
    assert io.dumps(io.listhom_to_json(back)) == io.dumps(doc)


def test_builtin_target_expands():
    doc = {"format": "homred/1", "target": "C6", "guest": {"n": 1, "edges": []}}
    inst = io.listhom_from_json(doc)
    assert inst.target == C6 and inst.lists == (frozenset(range(6)),)


def test_annotated_round_trip():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    a = annotated_from_lists(g, [{A, C}, {B}, {A, C}], [{0, 2}], [(0, 2)])
    doc = io.annotated_to_json(a)
    assert doc["lists"]["1"] == ["b"]
    back = io.instance_from_json(io.loads(io.dumps(doc)))
    assert back == a


def test_f_larger_than_v_rejected():
    doc = {"format": "homred/1", "guest": {"n": 4, "edges": []}, "partition": [[0, 1, 2, 3], []],
           "lists": {str(v): ["a", "c"] for v in range(4)}, "S": [],
           "F": [[u, v] for u in range(4) for v in range(u + 1, 4)]}
    with pytest.raises((InvalidArgument, InvariantViolation), match="F_le_V|F:"):
        io.annotated_from_json(doc)


def test_unknown_format_rejected():
    with pytest.raises(InvalidArgument, match="format"):
        io.loads(json.dumps({"format": "homred/9"}))


def test_malformed_fields_are_named():
    with pytest.raises(InvalidArgument, match="guest.edges"):
        io.listhom_from_json({"target": "C6", "guest": {"n": 2, "edges": [[0]]}})
    with pytest.raises(InvalidArgument, match="lists"):
        io.listhom_from_json({"target": "C6", "guest": {"n": 1, "edges": []}, "lists": {"5": [0]}})
    with pytest.raises(InvalidArgument, match="json"):
        io.loads("{not json")


def test_gadget_round_trip_keeps_provenance():
    d = cycle_not_gadget(C6, list(range(6)), "ace")
    doc = io.gadget_to_json(d)
    back = io.gadget_from_json(io.loads(io.dumps(doc)))
    assert back.provenance == d.provenance and back.distinguished == d.distinguished
    back.verified = False
    assert verify_gadget(C6, back)


def test_report_round_trip():
    r = classify_hardness(builtin("K3"))
    doc = io.report_to_json(r, builtin("K3"))
    back = io.report_from_json(io.loads(io.dumps(doc)))
    assert back.verdict == r.verdict and verify_report_witness(builtin("K3"), back)


def test_batch_errors():
    doc = {"format": "homred/1", "n": 3, "k": 2, "instances": [{"n": 3, "edges": []}, {"n": 4, "edges": []}]}
    with pytest.raises(InvalidArgument, match=r"instances\[1\]"):
        io.batch_from_json(doc)


def test_canonical_bytes():
    inst = ListHomInstance(Graph.from_edges(2, [(0, 1)]), C6, (frozenset({2, 0}), frozenset({1})))
    a = io.dumps(io.listhom_to_json(inst))
    b = io.dumps(json.loads(a))
    assert a == b and a.endswith("\n")
