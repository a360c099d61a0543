import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ocf_bands.cube import HsiCube
from ocf_bands.ranking import (
    RankVector,
    band_entropy,
    density_cutoff,
    efdpc_components,
    rank_bands,
    rank_efdpc,
    rank_entropy,
    rank_mvpca,
)

from conftest import seeds


# --- variance -------------------------------------------------------------

def test_mvpca_examples():
    x = np.array([[3.0, 3.0, 3.0, 3.0], [0.0, 0.0, 1.0, 1.0]])
    assert rank_mvpca(x).scores.tolist() == [0.0, 0.25]


def test_mvpca_scaling_law(rng):
    b = rng.normal(size=50)
    b -= b.mean()
    r = rank_mvpca(np.vstack([2 * b, b])).scores
    assert r[0] == pytest.approx(4 * r[1], rel=1e-12)


def test_mvpca_needs_two_pixels():
    with pytest.raises(ValueError):
        rank_mvpca(np.ones((3, 1)))


# --- entropy --------------------------------------------------------------

def test_entropy_examples():
    assert band_entropy(np.full(10, 2.5)) == 0.0
    assert band_entropy(np.arange(256.0)) == pytest.approx(math.log(256), abs=1e-12)
    assert band_entropy(np.array([0.0, 0, 0, 1, 1, 1])) == pytest.approx(math.log(2), abs=1e-15)


def test_entropy_matches_counting_reference(rng):
    x = rng.normal(size=(3, 500))
    for band, score in zip(x, rank_entropy(x, n_bins=16).scores):
        lo, hi = band.min(), band.max()
        idx = np.minimum(((band - lo) / (hi - lo) * 16).astype(int), 15)
        p = np.bincount(idx, minlength=16) / band.size
        p = p[p > 0]
        assert score == pytest.approx(-(p * np.log(p)).sum(), rel=1e-12)


def test_entropy_bounds(rng):
    s = rank_entropy(rng.random((5, 1000)), n_bins=8).scores
    assert np.all(s >= 0) and np.all(s <= math.log(8) + 1e-12)
    with pytest.raises(ValueError):
        rank_entropy(rng.random((2, 5)), n_bins=1)


# --- density peaks --------------------------------------------------------

def test_efdpc_two_tight_pairs():
    x = np.array([[0.0], [0.1], [5.0], [5.1]])
    top2 = set(np.argsort(-rank_efdpc(x).scores, kind="stable")[:2].tolist())
    assert len(top2 & {0, 1}) == 1 and len(top2 & {2, 3}) == 1


def test_efdpc_duplicate_of_peak_scores_zero(rng):
    x = rng.normal(size=(6, 20))
    rho, _, _ = efdpc_components(x)
    peak = int(np.argmax(rho))
    dup = np.vstack([x, x[peak]])
    rho2, delta2, _ = efdpc_components(dup)
    assert rho2[peak] == rho2[-1]
    assert delta2[-1] == 0.0
    assert rank_efdpc(dup).scores[-1] == 0.0


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 15))
def test_efdpc_peak_delta_is_max_distance(seed, n):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 7))
    rho, delta, _ = efdpc_components(x)
    d = np.linalg.norm(x[:, None] - x[None], axis=2)
    d /= d.max()
    order = np.lexsort((np.arange(n), -rho))
    peak = order[0]
    assert delta[peak] == pytest.approx(d[peak].max(), rel=1e-12)
    # every other band: distance to the nearest band ranked ahead of it
    for pos in range(1, n):
        l = order[pos]
        assert delta[l] == pytest.approx(d[l, order[:pos]].min(), rel=1e-12, abs=1e-15)
    assert np.all(rank_efdpc(x).scores >= 0)


def test_efdpc_cutoff_position():
    # 5 bands -> 10 pairwise distances; 2% of K' = 100 bands picks the 2nd smallest
    d = np.zeros((5, 5))
    iu = np.triu_indices(5, 1)
    d[iu] = np.arange(1, 11) / 10
    d = d + d.T
    assert density_cutoff(d, 5) == 0.1
    assert density_cutoff(d, 100) == 0.2
    assert density_cutoff(d, 151) == 0.4


def test_efdpc_identical_bands():
    with pytest.raises(ValueError):
        rank_efdpc(np.ones((3, 4)))


# --- shared properties ----------------------------------------------------

@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(["mvpca", "entropy", "efdpc"]))
def test_pixel_permutation_invariance(seed, method):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(6, 40))
    perm = rng.permutation(40)
    a = rank_bands(x, method).scores
    b = rank_bands(x[:, perm], method).scores
    np.testing.assert_allclose(a, b, rtol=1e-9, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from(["mvpca", "entropy"]), st.integers(0, 5))
def test_per_band_locality(seed, method, j):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(6, 40))
    y = x.copy()
    y[j] = rng.normal(size=40) * 3
    a, b = rank_bands(x, method).scores, rank_bands(y, method).scores
    others = np.arange(6) != j
    np.testing.assert_array_equal(a[others], b[others])


def test_rank_vector_validation():
    with pytest.raises(ValueError):
        RankVector([1.0, np.nan], "mvpca")
    r = RankVector([1.0, 3.0, 3.0], "mvpca")
    assert r.top() == 1 and len(r) == 3
    with pytest.raises(ValueError):
        rank_bands(np.ones((2, 2)), "pca")


def test_accepts_cube(rng):
    cube = HsiCube(rng.random((4, 9)), 3, 3)
    assert len(rank_entropy(cube)) == 4
