"""Rank-on-clusters band selection and band-count estimation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cube import HsiCube
from .dp import Cbiv, solve
from .objectives import build_scorer
from .ranking import RankVector, rank_bands, rank_mvpca
from .similarity import SimilarityMatrix, local_scaling_similarity

OBJECTIVE_NAMES = {"na": "NC", "trc": "TRC"}
RANKING_NAMES = {"mvpca": "MVPCA", "entropy": "IE", "efdpc": "FDPC"}


@dataclass(frozen=True, eq=False)
class BandSubset:
    """One selected band per cluster.

    ``positions`` are 1-based positions in the (possibly band-reduced) cube;
    ``band_ids`` are the matching original band numbers.
    """

    positions: tuple[int, ...]
    band_ids: tuple[int, ...]
    method: str = ""

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def indexes(self) -> np.ndarray:
        """0-based positions, for array indexing."""
        return np.asarray(self.positions, dtype=np.intp) - 1


def method_name(objective: str, ranking: str) -> str:
    """E.g. ``("na", "entropy")`` -> ``"NC-OC-IE"``."""
    return f"{OBJECTIVE_NAMES[objective]}-OC-{RANKING_NAMES[ranking]}"


def rcs_select(s: Cbiv, ranks: RankVector | np.ndarray, band_ids=None, method: str = "") -> BandSubset:
    """Highest-ranked band of every cluster (lowest position on ties)."""
    r = ranks.scores if isinstance(ranks, RankVector) else np.asarray(ranks, dtype=np.float64)
    if r.shape != (s.n_bands,):
        raise ValueError(f"need {s.n_bands} rank values, got {r.shape}")
    positions = tuple(lo + int(np.argmax(r[lo - 1:hi])) for lo, hi in s.clusters())
    ids = np.arange(1, s.n_bands + 1) if band_ids is None else np.asarray(band_ids)
    return BandSubset(positions, tuple(int(ids[p - 1]) for p in positions), method)


@dataclass(frozen=True, eq=False)
class SelectionResult:
    subset: BandSubset
    cbiv: Cbiv
    value: float
    ranks: RankVector


def select_bands(
    cube: HsiCube,
    k: int,
    objective: str = "na",
    ranking: str = "mvpca",
    *,
    m: int = 7,
    n_bins: int = 256,
    k_prime: Optional[int] = None,
    similarity: Optional[SimilarityMatrix] = None,
    ranks: Optional[RankVector] = None,
) -> SelectionResult:
    """Full pipeline: similarity, objective table, optimal partition, rank-on-clusters."""
    if not 1 <= k <= cube.n_bands:
        raise ValueError(f"band count {k} outside 1..{cube.n_bands}")
    if similarity is None:
        similarity = local_scaling_similarity(cube, m)
    if ranks is None:
        ranks = rank_bands(cube, ranking, n_bins=n_bins, k_prime=k_prime)
    table = build_scorer(objective, similarity, k, ranks)
    cbiv, value = solve(table, k)
    subset = rcs_select(cbiv, ranks, cube.band_ids, method_name(objective, ranks.method))
    return SelectionResult(subset, cbiv, value, ranks)


def variance_power_ratio(cube, k: int) -> float:
    """Share of total band variance held by the ``k`` highest-variance bands."""
    v = rank_mvpca(cube).scores
    if not 1 <= k <= v.size:
        raise ValueError(f"k={k} outside 1..{v.size}")
    total = v.sum()
    if total == 0:
        raise ValueError("every band is constant")
    return float(np.sort(v)[::-1][:k].sum() / total)


def crossing_count(ratios: np.ndarray, r_star: float) -> int:
    """Smallest k with ``ratios[k-1] > r_star``, i.e. R(k-1) <= R* < R(k) with R(0) = 0."""
    above = np.flatnonzero(np.asarray(ratios) > r_star)
    if above.size == 0:
        raise ValueError(f"ratio never exceeds {r_star}")
    return int(above[0]) + 1


@dataclass(frozen=True, eq=False)
class BandCountEstimate:
    k_star: int
    ratios: np.ndarray        # R_crvar(1..M)
    variances: np.ndarray     # selected-band variances, descending
    band_ids: tuple[int, ...]  # selected bands in the same order
    upper_bound: int          # M


def estimate_band_count(
    cube: HsiCube,
    lam: float = 0.2,
    r_star: float = 0.8,
    *,
    m: int = 7,
    similarity: Optional[SimilarityMatrix] = None,
) -> BandCountEstimate:
    """Number of bands needed to reach ``r_star`` of the correlation-reduced band power.

    ``ceil(lam * L)`` bands are picked with NC-OC-MVPCA; their variances,
    sorted descending, give the cumulative power curve.
    """
    if not 0 < lam <= 1:
        raise ValueError("lam must be in (0, 1]")
    if not 0 < r_star < 1:
        raise ValueError("r_star must be in (0, 1)")
    upper = max(1, math.ceil(lam * cube.n_bands))
    ranks = rank_mvpca(cube)
    if ranks.scores.sum() == 0:
        raise ValueError("every band is constant")
    result = select_bands(cube, upper, "na", similarity=similarity, ranks=ranks, m=m)
    pos = result.subset.indexes
    var = ranks.scores[pos]
    order = np.lexsort((pos, -var))
    var = var[order]
    cum = np.cumsum(var)
    ratios = cum / cum[-1]
    ids = tuple(result.subset.band_ids[i] for i in order)
    return BandCountEstimate(crossing_count(ratios, r_star), ratios, var, ids, upper)
