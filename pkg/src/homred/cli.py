"""Command-line entry point: ``homred <command> ...``.

Exit codes: 0 yes/success, 1 no/not-found/mismatch, 2 input error or bug.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import io
from .errors import (BoundExceeded, ConstructionError, HomredError, InvalidArgument,
                     NotApplicable, NotFound)
from .gadgets import DEFAULT_CAP, synthesize_unequal_gadget, verify_gadget
from .graph import Graph
from .harness import SUITE
from .pipeline import compose_bundle, random_batch, reduce_bundle
from .reductions import ReductionConfig, kit_for_target
from .solver import AnnotatedP4Instance, solve_annotated_p4, solve_list_hom, verify_assignment
from .structure import DEFAULT_CYCLE_LIMIT, DEFAULT_MAX_ORDER, classify_hardness, verify_report_witness

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    out: Optional[str] = None
    target: Optional[str] = None
    kind: Optional[str] = None
    max_order: int = DEFAULT_MAX_ORDER
    cycle_limit: int = DEFAULT_CYCLE_LIMIT
    budget: int = 64
    cap: int = DEFAULT_CAP
    seed: Optional[int] = None
    verify: bool = False
    format: str = io.FORMAT

    def __post_init__(self):
        for name in ("max_order", "cycle_limit", "budget", "cap"):
            if getattr(self, name) <= 0:
                raise InvalidArgument(f"--{name.replace('_', '-')}: must be positive")
        if self.format != io.FORMAT:
            raise InvalidArgument(f"format: unknown version {self.format!r}")

    def bounds(self) -> dict:
        return {"max_order": self.max_order, "cycle_vertex_limit": self.cycle_limit,
                "budget": self.budget, "cap": self.cap}


def _emit(doc, cfg: RunConfig, name: str = "result.json") -> None:
    text = io.dumps(doc)
    if cfg.out:
        path = cfg.out if not os.path.isdir(cfg.out) else os.path.join(cfg.out, name)
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _target(cfg: RunConfig) -> Graph:
    if not cfg.target:
        raise InvalidArgument("--target: required")
    if os.path.exists(cfg.target):
        return io.graph_from_json(io.read_json(cfg.target), "target")
    return io.graph_from_json(cfg.target, "--target")


def _single_input(cfg: RunConfig):
    if len(cfg.inputs) != 1:
        raise InvalidArgument("input: expected exactly one file")
    if cfg.inputs[0] == "-":
        return io.loads(sys.stdin.read())
    return io.read_json(cfg.inputs[0])


# -- commands --------------------------------------------------------------------------

def cmd_solve(cfg: RunConfig) -> int:
    inst = io.instance_from_json(_single_input(cfg))
    if isinstance(inst, AnnotatedP4Instance):
        f = solve_annotated_p4(inst)
    else:
        f = solve_list_hom(inst)
    doc = {"format": io.FORMAT, "decision": "yes" if f is not None else "no"}
    if f is not None:
        doc["assignment"] = io.assignment_to_json(inst, f)
    _emit(doc, cfg)
    return EXIT_YES if f is not None else EXIT_NO


def cmd_classify(cfg: RunConfig) -> int:
    h = _target(cfg)
    report = classify_hardness(h, cfg.max_order, cfg.cycle_limit)
    _emit(io.report_to_json(report, h), cfg)
    return EXIT_YES


def cmd_gadget(cfg: RunConfig) -> int:
    h = _target(cfg)
    kind = cfg.kind or "not-ace"
    rcfg = ReductionConfig(cfg.max_order, cfg.cycle_limit, cfg.budget, cfg.cap)
    try:
        kit, comp, assoc = kit_for_target(h, rcfg)
        if kind == "not-ace":
            d = kit.not_ace
        elif kind == "not-bd":
            d = kit.not_bd
        elif kind.startswith("blocking:"):
            try:
                k = int(kind.split(":", 1)[1])
            except ValueError:
                raise InvalidArgument(f"--kind: bad arity in {kind!r}") from None
            d = kit.blocking(k)
        elif kind == "unequal":
            triple = (kit.witness.get("triples") or {}).get("ace")
            if triple is None:
                raise NotApplicable("unequal gadgets are only used on the asteroid route")
            d = synthesize_unequal_gadget(kit.h, triple, cfg.budget, cfg.cap)
        else:
            raise InvalidArgument(f"--kind: unknown gadget kind {kind!r}")
    except (NotApplicable, NotFound, BoundExceeded) as exc:
        status = "not-applicable" if isinstance(exc, NotApplicable) else "not-found"
        _emit({"format": io.FORMAT, "status": status, "kind": kind, "reason": str(exc),
               "bounds": cfg.bounds()}, cfg)
        return EXIT_NO
    doc = io.gadget_to_json(d)
    doc["provenance"] = dict(d.provenance, component=comp, hstar=assoc is not None,
                             extended_p4=list(kit.g.as_tuple()))
    _emit(doc, cfg, f"gadget-{kind.replace(':', '')}.json")
    return EXIT_YES


def _write_stages(bundle: dict, out: str) -> None:
    os.makedirs(out, exist_ok=True)
    for idx, st in enumerate(bundle["stages"], 1):
        io.write_json(os.path.join(out, f"{idx:02d}-{st['stage']}.json"), st)
    io.write_json(os.path.join(out, "bundle.json"), bundle)


def _batch(cfg: RunConfig) -> list:
    if cfg.inputs:
        return io.batch_from_json(_single_input(cfg))
    if cfg.seed is None:
        raise InvalidArgument("input: give a batch file or --seed to generate one")
    return random_batch(random.Random(cfg.seed), 4, 3, 2)


def _pipeline(cfg: RunConfig, bundle: dict, dec) -> int:
    if cfg.out:
        _write_stages(bundle, cfg.out)
        summary = {k: v for k, v in bundle.items() if k != "stages"}
        summary["stages"] = [st["stage"] for st in bundle["stages"]]
        sys.stdout.write(io.dumps(summary))
    else:
        sys.stdout.write(io.dumps(bundle))
    if dec is not None:
        print("decisions agree" if dec.agree else "decisions DISAGREE", file=sys.stderr)
        return EXIT_YES if dec.agree else EXIT_NO
    return EXIT_YES


def cmd_compose(cfg: RunConfig) -> int:
    bundle, dec = compose_bundle(_batch(cfg), cfg.verify)
    return _pipeline(cfg, bundle, dec)


def cmd_reduce(cfg: RunConfig) -> int:
    rcfg = ReductionConfig(cfg.max_order, cfg.cycle_limit, cfg.budget, cfg.cap)
    bundle, dec = reduce_bundle(_batch(cfg), _target(cfg), rcfg, cfg.verify)
    return _pipeline(cfg, bundle, dec)


def verify_document(doc: dict) -> tuple[bool, str]:
    """Independently re-check a stored artifact."""
    kind = doc.get("kind")
    if kind == "gadget":
        d = io.gadget_from_json(doc)
        ok = verify_gadget(d.instance.target, d, cap=max(DEFAULT_CAP, 3 ** len(d.distinguished)))
        return ok, f"gadget with {d.n} vertices"
    if kind == "hardness-report":
        if "target" not in doc:
            raise InvalidArgument("report: needs an embedded target to re-verify")
        h = io.graph_from_json(doc["target"], "target")
        return verify_report_witness(h, io.report_from_json(doc)), f"report {doc['verdict']}"
    if kind == "pipeline-bundle":
        stages = {st["stage"]: st for st in doc["stages"]}
        batch = io.batch_from_json(stages["batch"]["document"])
        if doc["command"] == "reduce":
            cfg = ReductionConfig(**doc["config"])
            again, dec = reduce_bundle(batch, io.graph_from_json(doc["target"]), cfg, verify=True)
        else:
            again, dec = compose_bundle(batch, verify=True)
        same = [st["document"] for st in again["stages"]] == [st["document"] for st in doc["stages"]]
        return same and dec.agree, f"bundle replay {'identical' if same else 'differs'}"
    inst = io.instance_from_json(doc)
    f = solve_annotated_p4(inst) if isinstance(inst, AnnotatedP4Instance) else solve_list_hom(inst)
    return f is None or verify_assignment(inst, f), "instance"


def cmd_verify(cfg: RunConfig) -> int:
    ok = True
    if not cfg.inputs:
        names = [cfg.kind] if cfg.kind else list(SUITE)
        for name in names:
            if name not in SUITE:
                raise InvalidArgument(f"--kind: unknown suite {name!r}")
            r = SUITE[name]()
            print(r.line())
            ok &= r.passed
        return EXIT_YES if ok else EXIT_NO
    for path in cfg.inputs:
        passed, what = verify_document(io.read_json(path))
        print(f"{'PASS' if passed else 'FAIL'} {path} {what}")
        ok &= passed
    return EXIT_YES if ok else EXIT_NO


COMMANDS = {"solve": cmd_solve, "classify": cmd_classify, "gadget": cmd_gadget,
            "compose": cmd_compose, "reduce": cmd_reduce, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homred", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "decide a list-hom or annotated P4 instance",
        "classify": "search the target for a hardness witness",
        "gadget": "emit a verified gadget for the target",
        "compose": "cross-compose a Clique batch",
        "reduce": "run the full Clique -> List H-Colouring pipeline",
        "verify": "re-check stored artifacts, or run the invariant suites",
    }
    for name, text in helps.items():
        s = sub.add_parser(name, help=text)
        s.add_argument("inputs", nargs="*", help="input JSON file(s); '-' reads stdin")
        s.add_argument("--target", help="builtin name (C6, K3, reflexive:P2, C6+K2) or graph JSON file")
        s.add_argument("--kind", help="gadget kind (not-ace, not-bd, blocking:K, unequal) or suite name")
        s.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
        s.add_argument("--cycle-limit", type=int, default=DEFAULT_CYCLE_LIMIT)
        s.add_argument("--budget", type=int, default=64)
        s.add_argument("--cap", type=int, default=DEFAULT_CAP)
        s.add_argument("--seed", type=int)
        s.add_argument("--verify", action="store_true")
        s.add_argument("--out", help="output file (or directory for pipeline stages)")
        s.add_argument("--emit-gadget", dest="out_gadget", help="alias of --out for gadget")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        cfg = RunConfig(args.command, args.inputs, args.out or args.out_gadget, args.target,
                        args.kind, args.max_order, args.cycle_limit, args.budget, args.cap,
                        args.seed, args.verify)
        return COMMANDS[cfg.command](cfg)
    except ConstructionError as exc:
        print(f"error: construction failed verification: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (HomredError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
