"""Wall time of the partition solver against band count and cluster count.

    python scripts/dp_scaling.py --bands 100 200 400 800 --clusters 15
"""
import argparse
import time

import numpy as np

from ocf_bands.dp import solve
from ocf_bands.objectives import build_na_scorer


def median_time(table, k, repeats):
    solve(table, k)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        solve(table, k)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bands", type=int, nargs="+", default=[100, 200, 400, 800])
    ap.add_argument("--clusters", type=int, nargs="+", default=[15])
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print("L,K,median_seconds,table_build_seconds")
    for n in args.bands:
        a = rng.uniform(0.01, 1, (n, n))
        w = np.triu(a, 1) + np.triu(a, 1).T + np.eye(n)
        for k in args.clusters:
            t0 = time.perf_counter()
            table = build_na_scorer(w, k)
            build = time.perf_counter() - t0
            print(f"{n},{k},{median_time(table, k, args.repeats):.6f},{build:.6f}")


if __name__ == "__main__":
    main()
