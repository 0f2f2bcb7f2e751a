"""Size blow-up of the annotated -> List H-Colouring stage across targets and batch shapes."""

import argparse
import random

from homred.graph import builtin
from homred.pipeline import random_batch
from homred.reductions import cross_compose, reduce_for_target


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--targets", nargs="*", default=["C6", "C8", "K3", "C6+K2", "C10"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"{'target':8} {'t':>3} {'n':>3} {'k':>3} {'|V|':>6} {'|V~|':>7} {'ratio':>7} {'C':>5} route")
    for name in args.targets:
        h = builtin(name)
        for t, n, k in ((1, 3, 2), (4, 3, 2), (4, 4, 3), (9, 3, 2)):
            a, _ = cross_compose(random_batch(rng, t, n, k))
            res = reduce_for_target(a, h)
            s = res.size
            print(f"{name:8} {t:>3} {n:>3} {k:>3} {s.vertices_in:>6} {s.vertices_out:>7} "
                  f"{s.ratio:>7.2f} {s.constant:>5} {res.route}")


if __name__ == "__main__":
    main()
