"""Interval score tables for the normalized-association and top-rank-cut objectives.

A table holds ``f(lo..hi)`` for every contiguous band interval together with
the operator used to combine cluster scores and the optimization direction.
Band positions in the public API are 1-based and inclusive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ranking import RankVector
from .similarity import SimilarityMatrix

COMBINERS = ("sum", "max")
DIRECTIONS = ("maximize", "minimize")


@dataclass(frozen=True, eq=False)
class IntervalScoreTable:
    """Scores ``f(i..j)`` stored in ``scores[i-1, j-1]``; the lower triangle is NaN."""

    scores: np.ndarray
    combiner: str
    direction: str
    objective: str = "custom"

    def __post_init__(self):
        s = np.array(self.scores, dtype=np.float64, copy=True)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] < 1:
            raise ValueError(f"score table must be square, got {s.shape}")
        if self.combiner not in COMBINERS:
            raise ValueError(f"combiner must be one of {COMBINERS}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        upper = np.triu(np.ones(s.shape, dtype=bool))
        if not np.all(np.isfinite(s[upper])):
            raise ValueError("interval scores must be finite")
        s[~upper] = np.nan
        s.setflags(write=False)
        object.__setattr__(self, "scores", s)

    @property
    def size(self) -> int:
        return self.scores.shape[0]

    def __call__(self, lo: int, hi: int) -> float:
        if not 1 <= lo <= hi <= self.size:
            raise IndexError(f"interval [{lo}, {hi}] outside 1..{self.size}")
        return float(self.scores[lo - 1, hi - 1])

    def combine(self, a: float, b: float) -> float:
        return a + b if self.combiner == "sum" else max(a, b)

    def better(self, a: float, b: float) -> bool:
        """True when ``a`` is strictly better than ``b``."""
        return a > b if self.direction == "maximize" else a < b


def _as_matrix(w) -> np.ndarray:
    return w.entries if isinstance(w, SimilarityMatrix) else np.asarray(w, dtype=np.float64)


def _prefix2d(w: np.ndarray) -> np.ndarray:
    n = w.shape[0]
    s = np.zeros((n + 1, n + 1))
    s[1:, 1:] = w.cumsum(axis=0).cumsum(axis=1)
    return s


def build_na_scorer(w, k: int) -> IntervalScoreTable:
    """Normalized association of each interval, scaled by ``1/k``.

    ``f(i..j) = assoc(i..j, i..j) / assoc(i..j, all) / k`` from prefix sums, O(L^2).
    """
    w = _as_matrix(w)
    n = w.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"cluster count {k} outside 1..{n}")
    s = _prefix2d(w)
    row_prefix = np.concatenate(([0.0], w.sum(axis=1).cumsum()))
    i = np.arange(n)[:, None]  # interval start, 0-based
    j = np.arange(n)[None, :]  # interval end, 0-based inclusive
    upper = j >= i
    ii, jj = np.broadcast_to(i, (n, n)), np.broadcast_to(j + 1, (n, n))
    within = s[jj, jj] - s[ii, jj] - s[jj, ii] + s[ii, ii]
    total = row_prefix[jj] - row_prefix[ii]
    with np.errstate(invalid="ignore", divide="ignore"):
        scores = np.where(upper, within / total / k, np.nan)
    return IntervalScoreTable(scores, "sum", "maximize", "na")


def top_rank_positions(ranks: np.ndarray) -> np.ndarray:
    """``p[i, j]`` = 0-based argmax of ``ranks[i..j]`` (lowest index on ties); -1 below diagonal."""
    n = ranks.size
    p = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        r = ranks[i:]
        running = np.maximum.accumulate(r)
        new_max = np.empty(r.size, dtype=bool)
        new_max[0] = True
        new_max[1:] = r[1:] > running[:-1]
        p[i, i:] = np.maximum.accumulate(np.where(new_max, np.arange(r.size), 0)) + i
    return p


def build_trc_scorer(w, ranks: RankVector | np.ndarray) -> IntervalScoreTable:
    """Similarity of each interval's top-ranked band to the bands outside it.

    Combined with ``max`` and minimized.
    """
    w = _as_matrix(w)
    r = ranks.scores if isinstance(ranks, RankVector) else np.asarray(ranks, dtype=np.float64)
    n = w.shape[0]
    if r.shape != (n,):
        raise ValueError(f"need {n} rank values, got {r.shape}")
    p = top_rank_positions(r)
    row_prefix = np.zeros((n, n + 1))
    row_prefix[:, 1:] = w.cumsum(axis=1)
    scores = np.full((n, n), np.nan)
    for i in range(n):
        pi = p[i, i:]
        ends = np.arange(i, n) + 1
        left = row_prefix[pi, i]
        right = row_prefix[pi, n] - row_prefix[pi, ends]
        scores[i, i:] = left + right
    return IntervalScoreTable(scores, "max", "minimize", "trc")


def build_scorer(objective: str, w, k: int, ranks=None) -> IntervalScoreTable:
    if objective == "na":
        return build_na_scorer(w, k)
    if objective == "trc":
        if ranks is None:
            raise ValueError("the trc objective needs band ranks")
        return build_trc_scorer(w, ranks)
    raise ValueError(f"unknown objective {objective!r}; choose 'na' or 'trc'")


def normalized_cut(w, boundaries) -> float:
    """Normalized cut of the contiguous partition given by cut positions."""
    w = _as_matrix(w)
    n = w.shape[0]
    edges = [0, *boundaries, n]
    k = len(edges) - 1
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        inside = np.zeros(n, dtype=bool)
        inside[a:b] = True
        cut = w[inside][:, ~inside].sum()
        vol = w[inside].sum()
        total += cut / vol
    return total / k
