import math

import numpy as np
import pytest

from ocf_bands.cube import HsiCube
from ocf_bands.evaluation import (
    ExperimentConfig,
    knn_overall_accuracy,
    knn_predict,
    oa_curve,
    stratified_split,
)
from ocf_bands.selection import BandSubset, select_bands
from ocf_bands.synthetic import two_class_cube


def test_split_counts(rng):
    labels = np.array([0] * 5 + [1] * 10)
    train, test = stratified_split(labels, 0.10, rng)
    assert train.size == 1 and test.size == 9
    labels = np.array([1] * 10 + [2] * 20 + [0] * 3)
    train, test = stratified_split(labels, 0.10, rng)
    assert train.size == 3 and test.size == 27
    assert not set(train) & set(test)
    assert set(train) | set(test) == set(np.flatnonzero(labels > 0))


def test_split_is_seeded():
    labels = np.repeat([1, 2, 3], 17)
    a = stratified_split(labels, 0.2, np.random.default_rng(4))
    b = stratified_split(labels, 0.2, np.random.default_rng(4))
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_split_rejects_tiny_class(rng):
    with pytest.raises(ValueError):
        stratified_split(np.array([1, 1, 2]), 0.1, rng)
    with pytest.raises(ValueError):
        stratified_split(np.zeros(4, dtype=int), 0.1, rng)


def test_knn_tie_rules():
    train_x = np.array([[0.0], [2.0], [2.0], [10.0]])
    train_y = np.array([3, 1, 2, 1])
    # distances 1, 1, 1, 9: the three nearest tie; votes 3, 1, 2 tie -> class 1
    assert knn_predict(train_x, train_y, [[1.0]], k=3).tolist() == [1]
    # k=1: equal distances to index 0 and 1 -> lower training index wins
    assert knn_predict(train_x, train_y, [[1.0]], k=1).tolist() == [3]


def test_knn_matches_brute_force(rng):
    tx, ty = rng.normal(size=(40, 3)), rng.integers(1, 4, 40)
    qx = rng.normal(size=(25, 3))
    got = knn_predict(tx, ty, qx, k=5, chunk=7)
    for q, g in zip(qx, got):
        d = ((tx - q) ** 2).sum(axis=1)
        nn = sorted(range(40), key=lambda i: (d[i], i))[:5]
        votes = np.bincount(ty[nn], minlength=4)
        assert g == int(np.argmax(votes))


def test_memorization_gives_perfect_accuracy(rng):
    # each class is a single spectrum repeated, and every class keeps a training
    # pixel, so each test pixel has an identical training twin
    spectra = rng.normal(size=(4, 6))
    labels = np.repeat(np.arange(1, 7), 15)
    cube = HsiCube(spectra[:, labels - 1], 9, 10, labels=labels)
    rep = knn_overall_accuracy(cube, [1, 2, 3, 4], ExperimentConfig(0.1, 3, 1, 0))
    assert rep.mean_oa == 1.0


def test_separable_classes():
    cube = two_class_cube(np.random.default_rng(0))
    rep = knn_overall_accuracy(cube, [3, 17, 30], ExperimentConfig(rng_seed=1))
    assert rep.mean_oa > 0.95
    assert len(rep.run_oas) == 10


def test_shuffled_labels_near_chance():
    rng = np.random.default_rng(0)
    cube = two_class_cube(rng, shape=(50, 50))
    cube = cube.replace(labels=rng.permutation(cube.labels))
    cfg = ExperimentConfig(rng_seed=2)
    rep = knn_overall_accuracy(cube, [3, 17, 30], cfg)
    n_test = cube.n_pixels - 2 * math.ceil(0.1 * cube.n_pixels / 2)
    sigma = math.sqrt(0.25 / (n_test * cfg.n_runs))
    assert abs(rep.mean_oa - 0.5) < 3 * sigma


def test_report_properties(rng):
    cube = two_class_cube(rng)
    cfg = ExperimentConfig(0.1, 4, 3, 9)
    a = knn_overall_accuracy(cube, [5, 9, 20], cfg)
    b = knn_overall_accuracy(cube, [20, 5, 9], cfg)
    assert a.run_oas == b.run_oas
    assert a.mean_oa == sum(a.run_oas) / len(a.run_oas)
    assert all(0 <= v <= 1 for v in a.run_oas)
    assert knn_overall_accuracy(cube, [5, 9, 20], cfg) == a


def test_subset_and_curve(rng):
    cube = two_class_cube(rng)
    cfg = ExperimentConfig(band_counts=(2, 4), n_runs=2)
    curve = oa_curve(cube, lambda k: select_bands(cube, k, "na", "entropy").subset, cfg)
    assert curve.method == "NC-OC-IE"
    assert [k for k, _ in curve.points] == [2, 4]
    assert all(rep.n_bands == k for k, rep in curve.points)


def test_errors(rng):
    cube = two_class_cube(rng)
    with pytest.raises(ValueError):
        knn_overall_accuracy(cube.replace(labels=None), [1])
    with pytest.raises(ValueError):
        knn_overall_accuracy(cube, [])
    with pytest.raises(ValueError):
        knn_overall_accuracy(cube, [999])
    with pytest.raises(ValueError):
        ExperimentConfig(train_fraction=1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(n_runs=0)
    assert isinstance(BandSubset((1,), (1,)), BandSubset)
