"""Band affinity by local scaling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .cube import HsiCube


class DegenerateBandsError(ValueError):
    """A band coincides with its m-th neighbour, so its scale is zero."""


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric ``L x L`` affinity with unit diagonal and cached row sums."""

    entries: np.ndarray
    row_sums: np.ndarray

    @classmethod
    def from_array(cls, w) -> "SimilarityMatrix":
        w = np.array(w, dtype=np.float64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("similarity entries must be finite and strictly positive")
        if not np.array_equal(w, w.T):
            raise ValueError("similarity matrix must be symmetric")
        w.setflags(write=False)
        rs = w.sum(axis=1)
        rs.setflags(write=False)
        return cls(w, rs)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def squared_band_distances(band_data: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances between band vectors."""
    d2 = cdist(band_data, band_data, metric="sqeuclidean")
    np.fill_diagonal(d2, 0.0)
    # cdist is symmetric up to rounding; force it exactly
    return np.minimum(d2, d2.T)


def local_scales(d2: np.ndarray, m: int) -> np.ndarray:
    """Squared distance from each band to its m-th nearest other band."""
    n = d2.shape[0]
    m = min(m, n - 1)
    if m < 1:
        raise ValueError("local scaling needs at least two bands")
    others = d2[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    # the m-th smallest value does not depend on how equal distances are ordered
    return np.partition(others, m - 1, axis=1)[:, m - 1]


def local_scaling_similarity(cube: HsiCube | np.ndarray, m: int = 7) -> SimilarityMatrix:
    """``w_ij = exp(-|x_i - x_j|^2 / (s_i s_j))``, ``s_i`` = squared m-th neighbour distance.

    ``m`` is clamped to ``L - 1`` for cubes with few bands.
    """
    data = cube.band_data if isinstance(cube, HsiCube) else np.asarray(cube, dtype=np.float64)
    if data.shape[0] < 2:
        raise ValueError("local scaling needs at least two bands")
    if m < 1:
        raise ValueError("neighbour order m must be >= 1")
    d2 = squared_band_distances(data)
    sigma = local_scales(d2, m)
    if np.any(sigma == 0):
        bad = np.flatnonzero(sigma == 0) + 1
        raise DegenerateBandsError(
            f"bands at positions {bad.tolist()} coincide with their m-th neighbour"
        )
    w = np.exp(-d2 / np.outer(sigma, sigma))
    # exp underflows to 0 for far-apart bands; keep the positivity invariant
    np.maximum(w, np.finfo(np.float64).tiny, out=w)
    np.fill_diagonal(w, 1.0)
    return SimilarityMatrix.from_array(w)
