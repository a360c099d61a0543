"""KNN overall-accuracy evaluation of band subsets on labelled cubes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .cube import HsiCube
from .selection import BandSubset


@dataclass(frozen=True)
class ExperimentConfig:
    train_fraction: float = 0.10
    n_runs: int = 10
    knn_k: int = 3
    rng_seed: int = 0
    band_counts: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError("train_fraction must be in (0, 1)")
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")


@dataclass(frozen=True)
class OaReport:
    run_oas: tuple[float, ...]
    mean_oa: float
    n_bands: int = 0
    method: str = ""


@dataclass
class OaCurve:
    """OA against the number of selected bands."""

    method: str
    points: list[tuple[int, OaReport]] = field(default_factory=list)


def stratified_split(labels, train_fraction: float, rng: np.random.Generator):
    """Per class draw ``ceil(fraction * count)`` training pixels; background (0) is skipped.

    Returns sorted ``(train, test)`` pixel index arrays.
    """
    labels = np.asarray(labels)
    train, test = [], []
    for c in np.unique(labels[labels > 0]):
        idx = np.flatnonzero(labels == c)
        if idx.size < 2:
            raise ValueError(f"class {c} has fewer than 2 labelled pixels")
        n_train = math.ceil(train_fraction * idx.size)
        # at least one test pixel per class
        n_train = min(n_train, idx.size - 1)
        perm = rng.permutation(idx)
        train.append(perm[:n_train])
        test.append(perm[n_train:])
    if not train:
        raise ValueError("no labelled pixels")
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def knn_predict(train_x, train_y, test_x, k: int = 3, chunk: int = 2048) -> np.ndarray:
    """Majority vote of the ``k`` nearest training samples (Euclidean).

    Distance ties go to the lower training index, vote ties to the lower class id.
    """
    train_x = np.asarray(train_x, dtype=np.float64)
    train_y = np.asarray(train_y)
    test_x = np.asarray(test_x, dtype=np.float64)
    k = min(k, train_x.shape[0])
    classes, y_idx = np.unique(train_y, return_inverse=True)
    out = np.empty(test_x.shape[0], dtype=train_y.dtype)
    for start in range(0, test_x.shape[0], chunk):
        d = cdist(test_x[start:start + chunk], train_x, metric="sqeuclidean")
        nn = np.argsort(d, axis=1, kind="stable")[:, :k]
        votes = np.zeros((d.shape[0], classes.size), dtype=np.int64)
        np.add.at(votes, (np.arange(d.shape[0])[:, None], y_idx[nn]), 1)
        out[start:start + chunk] = classes[np.argmax(votes, axis=1)]
    return out


def run_seeds(config: ExperimentConfig) -> list[np.random.Generator]:
    """Independent per-run generators spawned from the master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(config.rng_seed).spawn(config.n_runs)]


def knn_overall_accuracy(
    cube: HsiCube,
    subset: BandSubset | Sequence[int],
    config: ExperimentConfig = ExperimentConfig(),
) -> OaReport:
    """Mean and per-run OA of KNN on the selected bands over repeated random splits.

    ``subset`` may be a :class:`BandSubset` or a list of original band ids.
    """
    if cube.labels is None:
        raise ValueError("cube has no labels")
    if isinstance(subset, BandSubset):
        positions, method = subset.indexes, subset.method
    else:
        positions = np.array([np.searchsorted(cube.band_ids, b) for b in subset], dtype=np.intp)
        if np.any(positions >= cube.n_bands) or np.any(cube.band_ids[positions] != np.asarray(subset)):
            raise ValueError(f"band ids {list(subset)} not all present in cube")
        method = "bands"
    if len(positions) == 0:
        raise ValueError("empty band subset")
    x = cube.features(positions)
    oas = []
    for rng in run_seeds(config):
        train, test = stratified_split(cube.labels, config.train_fraction, rng)
        pred = knn_predict(x[train], cube.labels[train], x[test], config.knn_k)
        oas.append(float(np.mean(pred == cube.labels[test])))
    return OaReport(tuple(oas), sum(oas) / len(oas), len(positions), method)


def oa_curve(
    cube: HsiCube,
    select: Callable[[int], BandSubset],
    config: ExperimentConfig,
) -> OaCurve:
    """Evaluate ``select(k)`` for every ``k`` in ``config.band_counts``."""
    curve = OaCurve(method="")
    for k in config.band_counts:
        subset = select(k)
        curve.method = curve.method or subset.method
        curve.points.append((k, knn_overall_accuracy(cube, subset, config)))
    return curve
