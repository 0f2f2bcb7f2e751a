"""End-to-end runs: Clique batch -> annotated instance -> List H-Colouring."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .graph import Graph
from .io import FORMAT, annotated_to_json, batch_to_json, graph_to_json, listhom_to_json
from .reductions import ReductionConfig, clique_or, cross_compose, reduce_for_target
from .solver import CliqueInstance, solve_annotated_p4, solve_list_hom, verify_assignment


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_batch(rng: random.Random, t: int, n: int, k: int, plant: float = 0.3) -> list:
    """t random graphs on n vertices; each plants a k-clique with probability ``plant``."""
    out = []
    for _ in range(t):
        g = random_graph(rng, n, rng.random())
        if k <= n and rng.random() < plant:
            chosen = sorted(rng.sample(range(n), k))
            extra = [(u, v) for i, u in enumerate(chosen) for v in chosen[i + 1:]]
            g = Graph.from_edges(n, list(g.edges) + extra)
        out.append(CliqueInstance(g, k))
    return out


@dataclass
class Decisions:
    clique_or: bool
    annotated: bool
    list_hom: Optional[bool] = None

    @property
    def agree(self) -> bool:
        vals = [self.clique_or, self.annotated] + ([self.list_hom] if self.list_hom is not None else [])
        return len(set(vals)) == 1


def compose_bundle(batch: Sequence[CliqueInstance], verify: bool = False) -> tuple[dict, Optional[Decisions]]:
    a, lay = cross_compose(batch)
    s_total = sum(len(s) for s in a.s_sequence)
    stages = [
        {"stage": "batch", "document": batch_to_json(list(batch))},
        {"stage": "annotated", "document": annotated_to_json(a), "layout": lay.to_json()},
    ]
    size = {"vertices": a.guest.n, "edges": len(a.guest.edges), "f_pairs": len(a.f_pairs),
            "s_sets": len(a.s_sequence), "s_total": s_total}
    bundle = {"format": FORMAT, "kind": "pipeline-bundle", "command": "compose",
              "stages": stages, "size_report": size}
    dec = None
    if verify:
        f = solve_annotated_p4(a)
        dec = Decisions(clique_or(batch), f is not None)
        if f is not None and not verify_assignment(a, f):
            dec.annotated = None
        bundle["decisions"] = asdict(dec) | {"agree": dec.agree}
    return bundle, dec


def reduce_bundle(batch: Sequence[CliqueInstance], h: Graph, config: Optional[ReductionConfig] = None,
                  verify: bool = False) -> tuple[dict, Optional[Decisions]]:
    cfg = config or ReductionConfig()
    a, lay = cross_compose(batch)
    res = reduce_for_target(a, h, cfg)
    stages = [
        {"stage": "batch", "document": batch_to_json(list(batch))},
        {"stage": "annotated", "document": annotated_to_json(a), "layout": lay.to_json()},
        {"stage": "list-hom", "document": listhom_to_json(res.instance), "route": res.route,
         "gadget": list(res.kit.g.as_tuple()), "component": res.component,
         "kit_route": res.kit.route},
        {"stage": "size-report", "document": res.size.to_json()},
        {"stage": "provenance", "document": res.provenance},
    ]
    bundle = {"format": FORMAT, "kind": "pipeline-bundle", "command": "reduce",
              "target": graph_to_json(h), "config": asdict(cfg), "stages": stages}
    dec = None
    if verify:
        fa = solve_annotated_p4(a)
        fl = solve_list_hom(res.instance)
        dec = Decisions(clique_or(batch), fa is not None, fl is not None)
        if (fa is not None and not verify_assignment(a, fa)) or (fl is not None and not verify_assignment(res.instance, fl)):
            dec.list_hom = None
        bundle["decisions"] = asdict(dec) | {"agree": dec.agree}
    return bundle, dec
