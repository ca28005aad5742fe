"""Seeded property sweep with a JSONL log, e.g.

    python3 scripts/run_sweep.py gen-segre --count 500 --ns 3,4,5 --max-mult 5 --log sweep.jsonl
"""

import argparse
import json
import sys
import time

from fatpoints import verify
from fatpoints.verify import SweepPlan

DEFAULT_GEOMETRIES = {
    "gen-segre": verify.GEN_SEGRE_GEOMETRIES,
    "conj-seg": verify.CONJ_GEOMETRIES,
    "thm-rnc": ("rnc", "general"),
    "rnc-sharp": ("simple", "double"),
    "cone": ("cone",),
}


def ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def main() -> int:
    ap = argparse.ArgumentParser(description="Run a seeded verification sweep.")
    ap.add_argument("claim", choices=sorted(DEFAULT_GEOMETRIES))
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ns", type=ints, default=(3,))
    ap.add_argument("--degrees", type=ints, default=())
    ap.add_argument("--max-mult", type=int, default=3)
    ap.add_argument("--geometries", default=None, help="comma separated; defaults depend on the claim")
    ap.add_argument("--count-applicable", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--log", default=None)
    args = ap.parse_args()

    geoms = tuple(args.geometries.split(",")) if args.geometries else DEFAULT_GEOMETRIES[args.claim]
    plan = SweepPlan(args.claim, args.count, master_seed=args.seed, ns=args.ns, max_mult=args.max_mult,
                     geometries=geoms, degrees=args.degrees, count_applicable=args.count_applicable)
    t = time.perf_counter()
    res = verify.sweep(plan, args.log, workers=args.workers, stop_on_violation=False)
    summary = res.summary()
    summary["seconds"] = round(time.perf_counter() - t, 2)
    print(json.dumps(summary, indent=2, sort_keys=True))
    for rec in res.violations:
        print("VIOLATION", rec.to_json(), file=sys.stderr)
    return 1 if res.violations else 0


if __name__ == "__main__":
    sys.exit(main())
