"""Exhaustive search over contiguous partitions, for checking the DP solver."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .dp import Cbiv, evaluate
from .objectives import IntervalScoreTable

MAX_CANDIDATES = 10 ** 6


@dataclass(frozen=True)
class OracleResult:
    cbiv: Cbiv
    value: float
    n_visited: int

    def __iter__(self):
        return iter((self.cbiv, self.value))


def count_partitions(n_bands: int, k: int) -> int:
    return math.comb(n_bands - 1, k - 1)


def iter_partitions(n_bands: int, k: int):
    """All cut vectors for ``k`` contiguous clusters, in lexicographic order."""
    for cuts in itertools.combinations(range(1, n_bands), k - 1):
        yield Cbiv(cuts, n_bands)


def brute_force_solve(table: IntervalScoreTable, k: int) -> OracleResult:
    """Best partition by enumeration; ties go to the lexicographically smallest cuts."""
    n = table.size
    if not 1 <= k <= n:
        raise ValueError(f"cluster count {k} outside 1..{n}")
    total = count_partitions(n, k)
    if total > MAX_CANDIDATES:
        raise ValueError(f"{total} candidate partitions exceeds the {MAX_CANDIDATES} limit")
    best = None
    best_value = 0.0
    visited = 0
    for s in iter_partitions(n, k):
        visited += 1
        v = evaluate(table, s)
        if best is None or table.better(v, best_value):
            best, best_value = s, v
    return OracleResult(best, best_value, visited)
