"""Invariant suites shared by ``homred verify`` and the acceptance tests.

Each check returns a CheckResult; nothing here raises on a failed
property, so a caller can report every line before deciding the exit code.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Optional

from .gadgets import ExtendedP4Gadget, boundary_table, build_blocking_gadget, cycle_not_gadget
from .graph import Graph, builtin
from .io import dumps
from .pipeline import random_batch, random_graph, reduce_bundle
from .reductions import (clique_or, cross_compose, expected_counts, lift_consistent_to_H,
                         reduce_for_target)
from .solver import (CliqueInstance, ListHomInstance, enumerate_all_hom, solve_annotated_p4, solve_list_hom,
                     verify_assignment)
from .structure import (NO_WITNESS, NP_COMPLETE, associated_bipartite, classify_hardness,
                        find_asteroid, verify_asteroid, verify_report_witness)

# linear blow-up constant of the annotated -> C6 stage
PIPELINE_CONSTANT = 127
GOLDEN_SEED = 20240607


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        info = " ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {info}".rstrip()


def small_graphs(max_n: int) -> list:
    """One representative per isomorphism class, 1 <= n <= max_n."""
    out = []
    for n in range(1, max_n + 1):
        pairs = list(combinations(range(n), 2))
        perms = list(permutations(range(n)))
        seen = set()
        for mask in range(1 << len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
            canon = min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges)) for p in perms)
            if canon not in seen:
                seen.add(canon)
                out.append(Graph.from_edges(n, canon))
    return out


def random_lists(rng: random.Random, n: int, target_n: int) -> tuple:
    return tuple(frozenset(x for x in range(target_n) if rng.random() < 0.5) for _ in range(n))


# -- 1 ---------------------------------------------------------------------------

def check_solver_oracle(seed: int = 1, per_target: int = 200, max_n: int = 5,
                        targets=("P4", "C6", "C8", "K3")) -> CheckResult:
    rng = random.Random(seed)
    guests = small_graphs(max_n)
    total = mismatch = bad_witness = 0
    for name in targets:
        h = builtin(name)
        for g in guests:
            for _ in range(per_target):
                inst = ListHomInstance(g, h, random_lists(rng, g.n, h.n))
                f = solve_list_hom(inst)
                want = bool(enumerate_all_hom(inst, cap=1))
                total += 1
                mismatch += (f is not None) != want
                bad_witness += f is not None and not verify_assignment(inst, f)
    return CheckResult("solver-oracle", mismatch == 0 and bad_witness == 0,
                       {"guests": len(guests), "instances": total, "mismatches": mismatch,
                        "bad_witnesses": bad_witness})


# -- 2 ---------------------------------------------------------------------------

def check_gadget_tables(blocking_ks=range(2, 7)) -> CheckResult:
    mismatches = 0
    swept = {}
    for k in (6, 8):
        h = builtin(f"C{k}")
        cyc = list(range(k))
        for q, allowed in (("ace", (0, 2, 4)), ("bd", (1, 3))):
            d = cycle_not_gadget(h, cyc, q)
            table = boundary_table(d)
            want = {(x, y): x != y for x in allowed for y in allowed}
            mismatches += table != want
            # second opinion from plain enumeration on these small gadgets
            for (x, y), ext in want.items():
                lists = list(d.instance.lists)
                lists[d.distinguished[0]] = frozenset({x})
                lists[d.distinguished[1]] = frozenset({y})
                inst = ListHomInstance(d.instance.guest, h, tuple(lists))
                mismatches += bool(enumerate_all_hom(inst, cap=1)) != ext
            swept[f"C{k}-{q}"] = len(table)
    h = builtin("C6")
    g = ExtendedP4Gadget(0, 1, 2, 3, 4)
    na = cycle_not_gadget(h, list(range(6)), "ace")
    for k in blocking_ks:
        d = build_blocking_gadget(h, g, k, na)
        table = boundary_table(d, cap=3 ** k)
        want = {t: any(x != g.c for x in t) for t in product((0, 2, 4), repeat=k)}
        mismatches += table != want
        swept[f"blocking{k}"] = len(table)
    return CheckResult("gadget-truth-tables", mismatches == 0,
                       {"mismatches": mismatches, "tuples": sum(swept.values())})


# -- 3 ---------------------------------------------------------------------------

def check_witnesses() -> CheckResult:
    failures = []
    r = classify_hardness(builtin("C6"))
    if not (r.verdict == NP_COMPLETE and r.witness["kind"] == "cycle"
            and len(r.witness["vertices"]) == 6 and verify_report_witness(builtin("C6"), r)):
        failures.append("C6")
    c10 = builtin("C10")
    ast = find_asteroid(c10)
    if not (ast and set(ast.u_seq) == {0, 4, 6} and set(ast.v_seq) == {1, 3, 7}
            and verify_asteroid(c10, ast)):
        failures.append("C10")
    r = classify_hardness(builtin("K3"))
    if not (r.verdict == NP_COMPLETE and r.route == "hstar" and verify_report_witness(builtin("K3"), r)):
        failures.append("K3")
    for name in ("P4", "reflexive:P2", "K2"):
        if classify_hardness(builtin(name)).verdict != NO_WITNESS:
            failures.append(name)
    return CheckResult("witness-search", not failures, {"failures": ",".join(failures) or "none"})


# -- 4 ---------------------------------------------------------------------------

def sparse_batch(rng: random.Random, t: int, n: int, k: int) -> list:
    return [CliqueInstance(random_graph(rng, n, 0.25), k) for _ in range(t)]


def check_cross_composition(seed: int = 4, batches: int = 50) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    a, _ = cross_compose(random_batch(rng, 4, 3, 2))
    s_total = sum(len(s) for s in a.s_sequence)
    if (a.guest.n, s_total) != (128, 74) or s_total > 3 * a.guest.n or len(a.f_pairs) > a.guest.n:
        bad.append("size(4,3,2)")
    yes = 0
    for b in range(batches):
        t = (1, 4, 9)[b % 3]
        n = rng.randint(2, 5)
        k = rng.randint(2, 3)
        # even batches are sparse so the no-direction is exercised too
        batch = random_batch(rng, t, n, k) if b % 2 else sparse_batch(rng, t, n, k)
        a, lay = cross_compose(batch)
        exp = expected_counts(lay.t_prime, n, k)
        if (a.guest.n, len(a.f_pairs), sum(len(s) for s in a.s_sequence)) != \
                (exp["vertices"], exp["f_pairs"], exp["s_total"]):
            bad.append(f"counts#{b}")
        f = solve_annotated_p4(a)
        want = clique_or(batch)
        yes += want
        if (f is not None) != want or (f is not None and not verify_assignment(a, f)):
            bad.append(f"or#{b}")
    return CheckResult("cross-composition", not bad,
                       {"batches": batches, "yes": yes, "failures": ",".join(bad) or "none"})


# -- 5 ---------------------------------------------------------------------------

def check_pipeline(seed: int = 5, per_target: int = 12, targets=("C6", "K3", "C6+K2")) -> CheckResult:
    rng = random.Random(seed)
    bad, worst, count = [], 0.0, 0
    for name in targets:
        h = builtin(name)
        for b in range(per_target):
            batch = random_batch(rng, (1, 4)[b % 2], rng.randint(2, 3), 2)
            a, _ = cross_compose(batch)
            res = reduce_for_target(a, h)
            f = solve_list_hom(res.instance)
            want = clique_or(batch)
            count += 1
            worst = max(worst, res.size.ratio)
            if (f is not None) != want or (f is not None and not verify_assignment(res.instance, f)):
                bad.append(f"{name}#{b}")
            if res.size.constant != PIPELINE_CONSTANT or res.instance.guest.n > PIPELINE_CONSTANT * a.guest.n:
                bad.append(f"{name}#{b}:size")
            if name == "C6+K2" and any(x >= 6 for l in res.instance.lists for x in l):
                bad.append(f"{name}#{b}:component")
    return CheckResult("end-to-end", not bad, {"instances": count, "C": PIPELINE_CONSTANT,
                                               "max_ratio": round(worst, 2),
                                               "failures": ",".join(bad) or "none"})


# -- 6 ---------------------------------------------------------------------------

def random_consistent_instance(rng: random.Random, hstar: Graph, n_prime: int) -> ListHomInstance:
    """Random bipartite guest; side A lists inside primes, side B inside double primes."""
    n = rng.randint(1, 7)
    side = [rng.random() < 0.5 for _ in range(n)]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if side[u] != side[v] and rng.random() < 0.5]
    primes, doubles = range(n_prime), range(n_prime, 2 * n_prime)
    lists = tuple(frozenset(x for x in (primes if side[v] else doubles) if rng.random() < 0.6)
                  for v in range(n))
    return ListHomInstance(Graph.from_edges(n, edges), hstar, lists)


def check_lift(seed: int = 6, count: int = 100) -> CheckResult:
    rng = random.Random(seed)
    assoc = associated_bipartite(builtin("K3"))
    bad = yes = 0
    for _ in range(count):
        inst = random_consistent_instance(rng, assoc.hstar, 3)
        lifted = lift_consistent_to_H(inst, assoc)
        d1 = bool(enumerate_all_hom(inst, cap=1))
        d2 = solve_list_hom(lifted) is not None
        d3 = bool(enumerate_all_hom(lifted, cap=1))
        yes += d1
        bad += not (d1 == d2 == d3)
    return CheckResult("consistency-lift", bad == 0, {"instances": count, "yes": yes, "mismatches": bad})


# -- 7 ---------------------------------------------------------------------------

def golden_bundle_text(seed: int = GOLDEN_SEED) -> str:
    batch = random_batch(random.Random(seed), 4, 3, 2)
    bundle, _ = reduce_bundle(batch, builtin("C6"), verify=True)
    return dumps(bundle)


def golden_digest(seed: int = GOLDEN_SEED) -> str:
    return hashlib.sha256(golden_bundle_text(seed).encode()).hexdigest()


def check_determinism(expected_digest: Optional[str] = None, runs: int = 2) -> CheckResult:
    texts = [golden_bundle_text() for _ in range(runs)]
    digest = hashlib.sha256(texts[0].encode()).hexdigest()
    ok = len(set(texts)) == 1 and (expected_digest is None or digest == expected_digest)
    return CheckResult("determinism", ok, {"runs": runs, "sha256": digest[:16],
                                           "golden": "match" if expected_digest in (None, digest) else "differs"})


SUITE: dict = {
    "solver-oracle": check_solver_oracle,
    "gadget-truth-tables": check_gadget_tables,
    "witness-search": check_witnesses,
    "cross-composition": check_cross_composition,
    "end-to-end": check_pipeline,
    "consistency-lift": check_lift,
    "determinism": check_determinism,
}


def run_suite(names=None, report: Callable[[str], None] = print) -> list:
    results = []
    for name, fn in SUITE.items():
        if names and name not in names:
            continue
        r = fn()
        report(r.line())
        results.append(r)
    return results
