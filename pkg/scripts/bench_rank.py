"""Time dense rank over GF(p) for a few square sizes."""

import argparse
import time

import numpy as np

from fatpoints.gfp import DEFAULT_PRIME, DenseMatrix, rank


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="250,500,1000,2000")
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    for size in (int(x) for x in args.sizes.split(",")):
        M = DenseMatrix(rng.integers(0, args.prime, size=(size, size)), args.prime)
        best = float("inf")
        for _ in range(args.repeats):
            t = time.perf_counter()
            r = rank(M)
            best = min(best, time.perf_counter() - t)
        print(f"n={size:5d}  rank={r:5d}  best of {args.repeats}: {best:.3f}s")


if __name__ == "__main__":
    main()
