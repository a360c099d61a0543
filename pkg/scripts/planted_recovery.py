"""How often each objective recovers planted contiguous band blocks.

    python scripts/planted_recovery.py --draws 100 --noise 0.01 0.05 0.1
"""
import argparse

import numpy as np

from ocf_bands.dp import solve
from ocf_bands.objectives import build_na_scorer, build_trc_scorer
from ocf_bands.ranking import rank_entropy
from ocf_bands.similarity import local_scaling_similarity
from ocf_bands.synthetic import planted_block_cube, planted_cuts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--draws", type=int, default=100)
    ap.add_argument("--noise", type=float, nargs="+", default=[0.01, 0.03, 0.1])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    truth = planted_cuts()
    print("noise,objective,recovered,draws")
    for noise in args.noise:
        rng = np.random.default_rng(args.seed)
        hits = {"na": 0, "trc": 0}
        for _ in range(args.draws):
            cube = planted_block_cube(rng, noise=noise)
            w = local_scaling_similarity(cube)
            hits["na"] += solve(build_na_scorer(w, 5), 5).cbiv.boundaries == truth
            hits["trc"] += solve(build_trc_scorer(w, rank_entropy(cube)), 5).cbiv.boundaries == truth
        for name, h in hits.items():
            print(f"{noise},{name},{h},{args.draws}")


if __name__ == "__main__":
    main()
