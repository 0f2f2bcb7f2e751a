"""Cross-check the composition's OR semantics on many random batches."""

import argparse
import random

from homred.pipeline import random_batch
from homred.reductions import clique_or, cross_compose
from homred.solver import solve_annotated_p4, verify_assignment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--batches", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    yes = bad = 0
    for b in range(args.batches):
        batch = random_batch(rng, rng.choice((1, 4, 9)), rng.randint(2, 5), rng.randint(2, 3))
        a, _ = cross_compose(batch)
        f = solve_annotated_p4(a)
        want = clique_or(batch)
        yes += want
        if (f is not None) != want or (f is not None and not verify_assignment(a, f)):
            bad += 1
            print(f"mismatch in batch {b}")
    print(f"batches={args.batches} yes={yes} mismatches={bad}")


if __name__ == "__main__":
    main()
