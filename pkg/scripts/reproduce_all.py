"""Run every reproduction target and print a compact PASS/FAIL table."""

import argparse
import sys
import time

from fatpoints.cli import TARGETS, reproduce
from fatpoints.gfp import DEFAULT_PRIME


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--verbose", action="store_true", help="print every individual check")
    args = ap.parse_args()

    failed = 0
    for target in TARGETS:
        t = time.perf_counter()
        rows = reproduce(target, args.prime, args.seeds)
        bad = [r for r in rows if r["status"] != "PASS"]
        failed += len(bad)
        print(f"{target:10s} {'PASS' if not bad else 'FAIL'}  {len(rows):4d} checks  "
              f"{time.perf_counter() - t:6.2f}s")
        for r in rows if args.verbose else bad:
            print(f"    {r['status']}  {r['check']}: expected {r['expected']}, got {r['measured']}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
