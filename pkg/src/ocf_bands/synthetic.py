"""Synthetic cubes with known structure."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .cube import HsiCube

# five blocks over 60 bands; the narrow first block has the lowest variance
PLANTED_SIZES = (8, 13, 13, 13, 13)
PLANTED_VARIANCES = (0.1, 4.0, 3.0, 2.0, 1.0)


def planted_block_cube(
    rng: np.random.Generator,
    block_sizes: Sequence[int] = PLANTED_SIZES,
    block_variances: Sequence[float] = PLANTED_VARIANCES,
    noise: float = 0.01,
    separation: float = 1.0,
    shape: tuple[int, int] = (64, 64),
) -> HsiCube:
    """Contiguous blocks of near-duplicate bands.

    Every band of block ``b`` is ``separation * b + sqrt(var_b) * t + noise * e``
    where ``t`` is a texture shared by all bands and ``e`` is per-band white noise.
    Planted cut positions are ``np.cumsum(block_sizes)[:-1]``.
    """
    if len(block_sizes) != len(block_variances):
        raise ValueError("need one variance per block")
    n = shape[0] * shape[1]
    texture = rng.standard_normal(n)
    bands = []
    for b, (size, var) in enumerate(zip(block_sizes, block_variances)):
        base = separation * b + np.sqrt(var) * texture
        bands.append(base + noise * rng.standard_normal((size, n)))
    return HsiCube(np.vstack(bands), *shape)


def planted_cuts(block_sizes: Sequence[int] = PLANTED_SIZES) -> tuple[int, ...]:
    return tuple(int(c) for c in np.cumsum(block_sizes)[:-1])


def two_class_cube(
    rng: np.random.Generator,
    n_bands: int = 40,
    shape: tuple[int, int] = (40, 40),
    gap: float = 2.0,
    noise: float = 0.3,
) -> HsiCube:
    """Two well-separated pixel classes (labels 1 and 2) with smooth spectra.

    Class spectra are smooth curves offset by ``gap`` in every band; pixel
    noise has standard deviation ``noise``.  Labels form two halves of the image.
    """
    n = shape[0] * shape[1]
    wl = np.linspace(0.0, 1.0, n_bands)
    mean1 = 1.0 + np.sin(2 * np.pi * wl)
    mean2 = mean1 + gap * (1.0 + 0.5 * np.cos(3 * np.pi * wl))
    labels = np.where(np.arange(n) < n // 2, 1, 2)
    means = np.where(labels[None, :] == 1, mean1[:, None], mean2[:, None])
    # per-pixel brightness shared across bands, plus band-level noise
    brightness = 0.2 * rng.standard_normal(n)
    data = means + brightness[None, :] + noise * rng.standard_normal((n_bands, n))
    return HsiCube(data, *shape, labels=labels, wavelengths=0.4 + 2.1 * wl)


def random_cube(
    rng: np.random.Generator,
    n_bands: int,
    shape: tuple[int, int],
    n_classes: int = 0,
    with_wavelengths: bool = False,
) -> HsiCube:
    n = shape[0] * shape[1]
    data = rng.standard_normal((n_bands, n)).cumsum(axis=0)
    labels = rng.integers(0, n_classes + 1, n) if n_classes else None
    wl = np.sort(rng.uniform(0.4, 2.5, n_bands)) if with_wavelengths else None
    return HsiCube(data, *shape, labels=labels, wavelengths=wl)
