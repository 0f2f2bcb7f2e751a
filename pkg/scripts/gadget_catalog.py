"""Build the gadget kit for a few targets and list sizes and verification status."""

import argparse
import time

from homred.errors import HomredError
from homred.graph import Graph, builtin
from homred.reductions import kit_for_target


def spider(*legs):
    edges, n = [], 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, n))
            prev, n = n, n + 1
    return Graph.from_edges(n, edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--blocking", type=int, default=4, help="largest blocking arity to build")
    args = ap.parse_args()
    targets = {name: builtin(name) for name in ("C6", "C8", "C10", "C12", "K3", "C6+K2")}
    targets["spider333"] = spider(3, 3, 3)
    for name, h in targets.items():
        start = time.perf_counter()
        try:
            kit, comp, assoc = kit_for_target(h)
        except HomredError as exc:
            print(f"{name:10} {type(exc).__name__}: {exc}")
            continue
        blocks = [kit.blocking(k) for k in range(2, args.blocking + 1)]
        print(f"{name:10} route={kit.route:9} g={kit.g.as_tuple()} "
              f"not_ace={kit.not_ace.n} not_bd={kit.not_bd.n} C={kit.size_constant()} "
              f"blocking={[b.n for b in blocks]} verified={all(b.verified for b in blocks)} "
              f"hstar={assoc is not None} secs={time.perf_counter() - start:.1f}")


if __name__ == "__main__":
    main()
