import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ocf_bands.cube import HsiCube
from ocf_bands.similarity import (
    DegenerateBandsError,
    SimilarityMatrix,
    local_scaling_similarity,
)

from conftest import seeds


def naive_local_scaling(x, m):
    """Independent double-loop reference."""
    n = len(x)
    m = min(m, n - 1)
    d2 = [[sum((a - b) ** 2 for a, b in zip(x[i], x[j])) for j in range(n)] for i in range(n)]
    sigma = []
    for i in range(n):
        others = sorted(d2[i][j] for j in range(n) if j != i)
        sigma.append(others[m - 1])
    return np.array([[math.exp(-d2[i][j] / (sigma[i] * sigma[j])) for j in range(n)] for i in range(n)])


def test_two_bands_hand_computed():
    cube = HsiCube([[0.0, 0.0], [1.0, 0.0]], 1, 2)
    w = local_scaling_similarity(cube)  # m clamps to 1
    assert w.entries[0, 1] == pytest.approx(0.36787944117144233, abs=1e-15)
    assert w.entries[0, 0] == w.entries[1, 1] == 1.0


def test_matches_naive_double_loop(rng):
    x = rng.normal(size=(10, 30)).cumsum(axis=0)
    w = local_scaling_similarity(HsiCube(x, 5, 6), m=7)
    ref = naive_local_scaling(x.tolist(), 7)
    np.testing.assert_allclose(w.entries, ref, rtol=1e-12, atol=0)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 12), st.integers(2, 20), st.integers(1, 9))
def test_invariants(seed, n_bands, n_pix, m):
    rng = np.random.default_rng(seed)
    w = local_scaling_similarity(rng.normal(size=(n_bands, n_pix)), m)
    e = w.entries
    assert np.array_equal(e, e.T)
    assert np.all(np.diag(e) == 1.0)
    assert np.all(e > 0) and np.all(e <= 1)
    np.testing.assert_allclose(w.row_sums, e.sum(axis=1), rtol=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_pixel_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(8, 25))
    perm = rng.permutation(25)
    a = local_scaling_similarity(x, 3).entries
    b = local_scaling_similarity(x[:, perm], 3).entries
    np.testing.assert_allclose(a, b, rtol=1e-10)


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(0.2, 5.0))
def test_common_scaling_law(seed, c):
    # the scale is a squared distance, so scaling bands by c maps w to w ** (1 / c**2)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(8, 25))
    a = local_scaling_similarity(x, 3).entries
    b = local_scaling_similarity(c * x, 3).entries
    np.testing.assert_allclose(b, a ** (1.0 / c ** 2), rtol=1e-9)


def test_duplicate_band_is_degenerate():
    x = np.array([[0.0, 1.0], [0.0, 1.0], [3.0, 2.0]])
    with pytest.raises(DegenerateBandsError):
        local_scaling_similarity(x, 1)
    # with m = 2 the second neighbour is distinct, so the scale is positive
    assert local_scaling_similarity(x, 2).entries[0, 1] == 1.0


def test_far_bands_stay_positive():
    x = np.array([[0.0] * 4, [0.1, 0, 0, 0], [1e6] * 4])
    w = local_scaling_similarity(x, 1).entries
    assert w[0, 2] > 0


def test_from_array_validation():
    with pytest.raises(ValueError):
        SimilarityMatrix.from_array([[1.0, 0.5], [0.4, 1.0]])
    with pytest.raises(ValueError):
        SimilarityMatrix.from_array([[1.0, 0.0], [0.0, 1.0]])
    w = SimilarityMatrix.from_array([[1.0, 0.5], [0.5, 1.0]])
    assert w.size == 2 and w.row_sums.tolist() == [1.5, 1.5]


def test_too_few_bands():
    with pytest.raises(ValueError):
        local_scaling_similarity(np.ones((1, 3)))
