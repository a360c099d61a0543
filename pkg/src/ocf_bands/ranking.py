"""Per-band importance scores (higher means more important)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .cube import HsiCube

RANKINGS = ("mvpca", "entropy", "efdpc")


@dataclass(frozen=True, eq=False)
class RankVector:
    scores: np.ndarray
    method: str

    def __post_init__(self):
        s = np.array(self.scores, dtype=np.float64, copy=True)
        if s.ndim != 1 or s.size < 1:
            raise ValueError("rank scores must be a non-empty 1-D array")
        if not np.all(np.isfinite(s)):
            raise ValueError("rank scores must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "scores", s)

    def __len__(self) -> int:
        return self.scores.size

    def top(self) -> int:
        """0-based position of the best band (lowest index on ties)."""
        return int(np.argmax(self.scores))


def _band_data(cube) -> np.ndarray:
    return cube.band_data if isinstance(cube, HsiCube) else np.asarray(cube, dtype=np.float64)


def rank_mvpca(cube) -> RankVector:
    """Population variance of every band."""
    data = _band_data(cube)
    if data.shape[1] < 2:
        raise ValueError("variance ranking needs at least two pixels")
    return RankVector(data.var(axis=1), "mvpca")


def band_entropy(values: np.ndarray, n_bins: int = 256) -> float:
    """Shannon entropy (nats) of a min-max binned gray-level histogram."""
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return 0.0
    counts, _ = np.histogram(values, bins=n_bins, range=(lo, hi))
    p = counts[counts > 0] / values.size
    return float(-(p * np.log(p)).sum())


def rank_entropy(cube, n_bins: int = 256) -> RankVector:
    if n_bins < 2:
        raise ValueError("entropy ranking needs n_bins >= 2")
    data = _band_data(cube)
    return RankVector(np.array([band_entropy(b, n_bins) for b in data]), "entropy")


def density_cutoff(dist: np.ndarray, k_prime: int) -> float:
    """Cutoff distance at the ``ceil(0.02 * k_prime)``-th smallest pairwise distance.

    Falls back to the smallest positive distance when that quantile is zero.
    """
    pairs = np.sort(dist[np.triu_indices_from(dist, k=1)])
    pos = max(1, math.ceil(0.02 * k_prime))
    pos = min(pos, pairs.size)
    dc = pairs[pos - 1]
    if dc == 0:
        positive = pairs[pairs > 0]
        if positive.size == 0:
            raise ValueError("all bands are identical; density ranking is undefined")
        dc = positive[0]
    return float(dc)


def efdpc_components(cube, k_prime: int | None = None):
    """Return ``(rho, delta, dc)`` for density-peak ranking of bands.

    Distances are Euclidean distances between band vectors divided by the
    largest one.  Bands are ordered by density (descending, lower index first
    on ties); each band's delta is its distance to the nearest band ahead of
    it in that order, and the leading band takes its largest distance.
    """
    data = _band_data(cube)
    n = data.shape[0]
    if n < 2:
        raise ValueError("density ranking needs at least two bands")
    k_prime = n if k_prime is None else int(k_prime)
    dist = squareform(pdist(data, metric="euclidean"))
    dmax = dist.max()
    if dmax == 0:
        raise ValueError("all bands are identical; density ranking is undefined")
    dist = dist / dmax
    dc = density_cutoff(dist, k_prime)
    kernel = np.exp(-((dist / dc) ** 2))
    # fsum makes rho exactly invariant to the order of a band's neighbours,
    # so duplicated bands tie exactly
    rho = np.array([math.fsum(row) for row in kernel]) - 1.0

    order = np.lexsort((np.arange(n), -rho))
    delta = np.empty(n)
    delta[order[0]] = dist[order[0]].max()
    for rank_pos in range(1, n):
        l = order[rank_pos]
        delta[l] = dist[l, order[:rank_pos]].min()
    return rho, delta, dc


def rank_efdpc(cube, k_prime: int | None = None) -> RankVector:
    """Density-peak score ``rho * delta**2``; ``k_prime`` defaults to L."""
    rho, delta, _ = efdpc_components(cube, k_prime)
    return RankVector(rho * delta ** 2, "efdpc")


def rank_bands(cube, method: str, *, n_bins: int = 256, k_prime: int | None = None) -> RankVector:
    if method == "mvpca":
        return rank_mvpca(cube)
    if method == "entropy":
        return rank_entropy(cube, n_bins)
    if method == "efdpc":
        return rank_efdpc(cube, k_prime)
    raise ValueError(f"unknown ranking {method!r}; choose from {RANKINGS}")
