"""Exact optimal contiguous band partitioning by dynamic programming.

For a score table ``f`` and a cluster count ``K`` the solver finds cut
positions ``0 < s_1 < ... < s_{K-1} < L`` optimizing
``f(1..s_1) (+) f(s_1+1..s_2) (+) ... (+) f(s_{K-1}+1..L)``, where ``(+)`` is
the table's combiner (sum or max), in O(L^2 K) time.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numba
import numpy as np

from .objectives import IntervalScoreTable


@dataclass(frozen=True)
class Cbiv:
    """Cut positions of a contiguous partition of ``n_bands`` bands.

    Cluster ``i`` (1-based) covers bands ``boundaries[i-2]+1 .. boundaries[i-1]``
    with implicit outer cuts at 0 and ``n_bands``.
    """

    boundaries: tuple[int, ...]
    n_bands: int

    def __post_init__(self):
        b = tuple(int(v) for v in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if self.n_bands < 1:
            raise ValueError("a partition needs at least one band")
        edges = (0, *b, self.n_bands)
        if any(lo >= hi for lo, hi in zip(edges[:-1], edges[1:])):
            raise ValueError(f"cut positions {b} are not strictly inside 1..{self.n_bands - 1}")

    @property
    def k(self) -> int:
        return len(self.boundaries) + 1

    @property
    def edges(self) -> tuple[int, ...]:
        return (0, *self.boundaries, self.n_bands)

    def clusters(self) -> list[tuple[int, int]]:
        """``(lo, hi)`` 1-based inclusive band ranges, left to right."""
        e = self.edges
        return [(a + 1, b) for a, b in zip(e[:-1], e[1:])]

    def labels(self) -> np.ndarray:
        """Cluster number (1-based) of every band."""
        return np.repeat(np.arange(1, self.k + 1), np.diff(self.edges))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Cbiv":
        labels = np.asarray(labels)
        cuts = np.flatnonzero(np.diff(labels) != 0) + 1
        return cls(tuple(cuts.tolist()), labels.size)


@dataclass(frozen=True, eq=False)
class DpTables:
    """``best[k-1, l-1]``: optimum for bands 1..l in k clusters.

    ``argbest[k-1, l-1]`` is the last band of the first k-1 clusters in that
    optimum (0 for k = 1).  Entries with ``l < k`` are undefined (NaN / -1).
    """

    best: np.ndarray
    argbest: np.ndarray


@dataclass(frozen=True, eq=False)
class Solution:
    cbiv: Cbiv
    value: float
    tables: DpTables

    def __iter__(self):
        # allows ``cbiv, value = solve(...)``
        return iter((self.cbiv, self.value))


def evaluate(table: IntervalScoreTable, s: Cbiv | Sequence[int]) -> float:
    """Fold the interval scores of partition ``s`` left to right."""
    if not isinstance(s, Cbiv):
        s = Cbiv(tuple(s), table.size)
    if s.n_bands != table.size:
        raise ValueError(f"partition covers {s.n_bands} bands, table has {table.size}")
    clusters = s.clusters()
    value = table(*clusters[0])
    for lo, hi in clusters[1:]:
        value = table.combine(value, table(lo, hi))
    return value


@numba.njit(cache=True)
def _fill_tables(scores, k, maximize, use_sum):
    n = scores.shape[0]
    best = np.full((k, n), np.nan)
    argbest = np.full((k, n), -1, dtype=np.int64)
    for l in range(n):
        best[0, l] = scores[0, l]
        argbest[0, l] = 0
    for kk in range(1, k):
        for l in range(kk, n):
            # previous clusters end at band p+1 (1-based), new cluster is p+2..l+1
            cur = 0.0
            cut = -1
            for p in range(kk - 1, l):
                prev = best[kk - 1, p]
                f = scores[p + 1, l]
                v = prev + f if use_sum else max(prev, f)
                # strict comparison keeps the smallest predecessor on ties
                if cut < 0 or (v > cur if maximize else v < cur):
                    cur = v
                    cut = p + 1
            best[kk, l] = cur
            argbest[kk, l] = cut
    return best, argbest


def dp_tables(table: IntervalScoreTable, k: int) -> DpTables:
    n = table.size
    if not 1 <= k <= n:
        raise ValueError(f"cluster count {k} outside 1..{n}")
    best, argbest = _fill_tables(
        table.scores, k, table.direction == "maximize", table.combiner == "sum"
    )
    return DpTables(best, argbest)


def backtrack(tables: DpTables, k: int, n: int) -> Cbiv:
    cuts = []
    end = n
    for kk in range(k - 1, 0, -1):
        end = int(tables.argbest[kk, end - 1])
        cuts.append(end)
    return Cbiv(tuple(reversed(cuts)), n)


def solve(table: IntervalScoreTable, k: int) -> Solution:
    """Optimal ``k``-cluster contiguous partition for ``table``."""
    tables = dp_tables(table, k)
    n = table.size
    return Solution(backtrack(tables, k, n), float(tables.best[k - 1, n - 1]), tables)
