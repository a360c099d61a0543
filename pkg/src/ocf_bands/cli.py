"""Command-line interface: ``ocf-bands <command> ...``.

All tabular output is CSV, to stdout or ``--out``.  Scalar results (objective
value, estimated band count) are written as leading ``# key=value`` comment
lines.

Exit codes: 0 success, 2 usage error, 3 unreadable or malformed input,
4 invalid parameter, 5 degenerate data.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .cube import CubeFormatError, load_cube, parse_band_ranges, remove_bands, write_cube
from .dp import solve
from .evaluation import ExperimentConfig, knn_overall_accuracy
from .objectives import build_scorer
from .oracle import brute_force_solve
from .ranking import RANKINGS, rank_bands
from .selection import estimate_band_count, method_name, select_bands
from .similarity import DegenerateBandsError, local_scaling_similarity

EXIT_USAGE, EXIT_INPUT, EXIT_PARAM, EXIT_DEGENERATE = 2, 3, 4, 5


class _Output:
    """Collects text and writes it atomically to ``path`` (or stdout) on success."""

    def __init__(self, path):
        self.path = path
        self.buf = io.StringIO()

    def comment(self, **items):
        for key, value in items.items():
            self.buf.write(f"# {key}={value}\n")

    def rows(self, header, rows):
        self.buf.write(",".join(header) + "\n")
        for row in rows:
            self.buf.write(",".join(_fmt(v) for v in row) + "\n")

    def commit(self):
        text = self.buf.getvalue()
        if self.path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        target = Path(self.path)
        fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=target.name + ".")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _shape(text):
    rows, cols = text.lower().split("x")
    return int(rows), int(cols)


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _add_input(p):
    p.add_argument("input", help="cube file (.hsib or .csv)")
    p.add_argument("--format", choices=("hsib", "csv"), help="input format (default: from suffix)")
    p.add_argument("--labels", help="single-column label CSV (csv input only)")
    p.add_argument("--shape", type=_shape, help="image shape ROWSxCOLS for csv input")
    p.add_argument("--remove", default="", help="original band ids to drop, e.g. 104-108,150-163,220")
    p.add_argument("--out", help="write CSV here instead of stdout")


def _add_pipeline(p, k_required=True, auto_k=False):
    p.add_argument("--objective", choices=("na", "trc"), default="na",
                   help="na: normalized association (normalized cut); trc: top-rank cut")
    p.add_argument("--ranking", choices=RANKINGS, default="mvpca")
    if k_required:
        p.add_argument("-K", dest="k", required=True,
                       help="number of bands" + (" or 'auto'" if auto_k else ""))
    p.add_argument("-m", type=int, default=7, help="local-scaling neighbour order")
    p.add_argument("--bins", type=int, default=256, help="histogram bins for entropy ranking")
    p.add_argument("--k-prime", type=int, help="E-FDPC K' (default: number of bands)")


def _read(args):
    cube = load_cube(args.input, args.format, labels_path=args.labels, shape=args.shape)
    if args.remove:
        cube = remove_bands(cube, parse_band_ranges(args.remove))
    return cube


def _k(args, cube) -> int:
    k = int(args.k)
    if not 1 <= k <= cube.n_bands:
        raise ValueError(f"-K {k} outside 1..{cube.n_bands}")
    return k


def cmd_convert(args):
    cube = _read(args)
    kwargs = {}
    fmt = args.to or ("csv" if args.output.lower().endswith(".csv") else "hsib")
    if fmt == "hsib":
        kwargs["dtype"] = args.dtype
    elif args.labels_out:
        kwargs["labels_path"] = args.labels_out
    write_cube(cube, args.output, fmt, **kwargs)
    print(f"wrote {cube.n_bands} bands x {cube.n_pixels} pixels to {args.output}", file=sys.stderr)


def cmd_similarity(args):
    cube = _read(args)
    w = local_scaling_similarity(cube, args.m)
    out = _Output(args.out)
    ids = cube.band_ids
    out.rows(["band_id", *map(str, ids)], ([b, *row] for b, row in zip(ids, w.entries)))
    out.commit()


def cmd_rank(args):
    cube = _read(args)
    r = rank_bands(cube, args.ranking, n_bins=args.bins, k_prime=args.k_prime)
    out = _Output(args.out)
    out.rows(["band_id", "score"], zip(cube.band_ids, r.scores))
    out.commit()


def _partition(args, cube, k):
    w = local_scaling_similarity(cube, args.m)
    ranks = rank_bands(cube, args.ranking, n_bins=args.bins, k_prime=args.k_prime)
    table = build_scorer(args.objective, w, k, ranks)
    return table, ranks


def cmd_cluster(args):
    cube = _read(args)
    k = _k(args, cube)
    table, _ = _partition(args, cube, k)
    cbiv, value = solve(table, k)
    ids = cube.band_ids
    out = _Output(args.out)
    out.comment(objective=args.objective, k=k, value=repr(value))
    out.rows(["cluster", "first_band_id", "last_band_id"],
             ((i, ids[lo - 1], ids[hi - 1]) for i, (lo, hi) in enumerate(cbiv.clusters(), 1)))
    out.commit()


def cmd_select(args):
    cube = _read(args)
    out = _Output(args.out)
    if str(args.k).lower() == "auto":
        est = estimate_band_count(cube, args.lam, args.rstar, m=args.m)
        k = est.k_star
        out.comment(k_star=k)
    else:
        k = _k(args, cube)
    res = select_bands(cube, k, args.objective, args.ranking,
                       m=args.m, n_bins=args.bins, k_prime=args.k_prime)
    ids = cube.band_ids
    out.comment(method=res.subset.method, k=k, value=repr(res.value))
    out.rows(
        ["cluster", "band_id", "first_band_id", "last_band_id", "rank_score"],
        ((i, b, ids[lo - 1], ids[hi - 1], res.ranks.scores[p - 1])
         for i, (b, p, (lo, hi)) in enumerate(
             zip(res.subset.band_ids, res.subset.positions, res.cbiv.clusters()), 1)),
    )
    out.commit()
    print(f"{res.subset.method} K={k}: " + "/".join(map(str, res.subset.band_ids)), file=sys.stderr)


def cmd_estimate_k(args):
    cube = _read(args)
    est = estimate_band_count(cube, args.lam, args.rstar, m=args.m)
    out = _Output(args.out)
    out.comment(k_star=est.k_star, upper_bound=est.upper_bound)
    out.rows(["k", "band_id", "variance", "r_crvar"],
             ((i, b, v, r) for i, (b, v, r) in enumerate(zip(est.band_ids, est.variances, est.ratios), 1)))
    out.commit()
    print(f"K*={est.k_star}", file=sys.stderr)


def cmd_evaluate(args):
    cube = _read(args)
    config = ExperimentConfig(args.train_frac, args.runs, args.knn_k, args.seed)
    rows = []
    if args.bands:
        rep = knn_overall_accuracy(cube, _int_list(args.bands), config)
        rows.append((rep.n_bands, rep.mean_oa, *rep.run_oas))
        method = "bands"
    else:
        if not args.band_counts:
            raise ValueError("give --bands or --band-counts")
        w = local_scaling_similarity(cube, args.m)
        ranks = rank_bands(cube, args.ranking, n_bins=args.bins, k_prime=args.k_prime)
        method = method_name(args.objective, args.ranking)
        for k in _int_list(args.band_counts):
            if not 1 <= k <= cube.n_bands:
                raise ValueError(f"band count {k} outside 1..{cube.n_bands}")
            res = select_bands(cube, k, args.objective, similarity=w, ranks=ranks)
            rep = knn_overall_accuracy(cube, res.subset, config)
            rows.append((k, rep.mean_oa, *rep.run_oas))
    out = _Output(args.out)
    out.comment(method=method, seed=args.seed, train_fraction=args.train_frac, knn_k=args.knn_k)
    out.rows(["K", "mean_oa", *(f"run_{i}" for i in range(1, args.runs + 1))], rows)
    out.commit()


def cmd_oracle(args):
    cube = _read(args)
    k = _k(args, cube)
    table, _ = _partition(args, cube, k)
    dp = solve(table, k)
    bf = brute_force_solve(table, k)
    out = _Output(args.out)
    out.comment(candidates=bf.n_visited, agree=dp.value == bf.value)
    out.rows(["solver", "value", "boundaries"],
             [("dp", dp.value, " ".join(map(str, dp.cbiv.boundaries))),
              ("brute_force", bf.value, " ".join(map(str, bf.cbiv.boundaries)))])
    out.commit()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ocf-bands", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, help="cap BLAS/OpenMP threads")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert between CSV and HSIB")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--format", choices=("hsib", "csv"))
    p.add_argument("--to", choices=("hsib", "csv"), help="output format (default: from suffix)")
    p.add_argument("--labels")
    p.add_argument("--labels-out", help="label CSV to write alongside csv output")
    p.add_argument("--shape", type=_shape)
    p.add_argument("--remove", default="")
    p.add_argument("--dtype", choices=("f32", "f64"), default="f64")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("similarity", help="export the local-scaling similarity matrix")
    _add_input(p)
    p.add_argument("-m", type=int, default=7)
    p.set_defaults(func=cmd_similarity)

    p = sub.add_parser("rank", help="per-band ranking scores")
    _add_input(p)
    p.add_argument("--ranking", choices=RANKINGS, default="mvpca")
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--k-prime", type=int)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("cluster", help="optimal contiguous band clusters")
    _add_input(p)
    _add_pipeline(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("select", help="cluster, then pick the top-ranked band of each cluster")
    _add_input(p)
    _add_pipeline(p, auto_k=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.2)
    p.add_argument("--rstar", type=float, default=0.8)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("estimate-k", help="estimate the number of bands needed")
    _add_input(p)
    p.add_argument("--lambda", dest="lam", type=float, default=0.2)
    p.add_argument("--rstar", type=float, default=0.8)
    p.add_argument("-m", type=int, default=7)
    p.set_defaults(func=cmd_estimate_k)

    p = sub.add_parser("evaluate", help="KNN overall accuracy of a band subset or a K sweep")
    _add_input(p)
    _add_pipeline(p, k_required=False)
    p.add_argument("--bands", help="comma-separated original band ids")
    p.add_argument("--band-counts", help="comma-separated K values to sweep")
    p.add_argument("--train-frac", type=float, default=0.10)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--knn-k", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("oracle", help="compare the DP solver with exhaustive search")
    _add_input(p)
    _add_pipeline(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    limiter = contextlib.nullcontext()
    if args.threads:
        from threadpoolctl import threadpool_limits
        limiter = threadpool_limits(limits=args.threads)
    try:
        with limiter:
            args.func(args)
    except (OSError, CubeFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateBandsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    return 0


if __name__ == "__main__":
    sys.exit(main())
