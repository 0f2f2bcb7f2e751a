"""Run every acceptance criterion and print one PASS/FAIL line each.

    python scripts/run_acceptance.py [--only NAME ...]
"""

import argparse
import hashlib
import pathlib
import sys
import time

from homred import harness

GOLDEN = pathlib.Path(__file__).resolve().parents[1] / "tests" / "golden" / "c6_bundle.json"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", nargs="*", choices=list(harness.SUITE))
    args = ap.parse_args()
    ok = True
    for name, check in harness.SUITE.items():
        if args.only and name not in args.only:
            continue
        start = time.perf_counter()
        if name == "determinism" and GOLDEN.exists():
            r = check(hashlib.sha256(GOLDEN.read_bytes()).hexdigest())
        else:
            r = check()
        print(f"{r.line()} seconds={time.perf_counter() - start:.1f}", flush=True)
        ok &= r.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
