"""Hyperspectral cube container and file I/O.

Pixels are linearized row-major, so pixel ``r * n_cols + c`` sits at row ``r``
and column ``c``.  Band data is held band-major as an ``(L, N)`` float64 array.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

PathLike = Union[str, Path]

HSIB_MAGIC = b"HSIB1\n"
_HSIB_DTYPES = {"f32": np.dtype("<f4"), "f64": np.dtype("<f8")}


class CubeFormatError(ValueError):
    """Raised when a cube file is malformed or inconsistent."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HsiCube:
    """An immutable hyperspectral image.

    ``band_data[l]`` is band ``l`` flattened to ``N = n_rows * n_cols`` pixels.
    ``band_ids`` keeps the original 1-based index of every band so that
    selections remain meaningful after noisy bands are removed.
    """

    band_data: np.ndarray
    n_rows: int
    n_cols: int
    labels: Optional[np.ndarray] = None
    wavelengths: Optional[np.ndarray] = None
    band_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        data = np.array(self.band_data, dtype=np.float64, copy=True)
        if data.ndim != 2:
            raise ValueError(f"band_data must be 2-D (bands, pixels), got shape {data.shape}")
        n_bands, n_pixels = data.shape
        if n_bands < 1 or n_pixels < 1:
            raise ValueError("a cube needs at least one band and one pixel")
        if int(self.n_rows) * int(self.n_cols) != n_pixels:
            raise ValueError(
                f"{self.n_rows} x {self.n_cols} pixels does not match band length {n_pixels}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("band_data contains non-finite values")
        object.__setattr__(self, "band_data", _frozen(data))
        object.__setattr__(self, "n_rows", int(self.n_rows))
        object.__setattr__(self, "n_cols", int(self.n_cols))

        if self.band_ids is None:
            ids = np.arange(1, n_bands + 1, dtype=np.int64)
        else:
            ids = np.array(self.band_ids, dtype=np.int64, copy=True)
            if ids.shape != (n_bands,):
                raise ValueError(f"band_ids must have {n_bands} entries")
            if np.any(np.diff(ids) <= 0) or ids[0] < 1:
                raise ValueError("band_ids must be positive and strictly increasing")
        object.__setattr__(self, "band_ids", _frozen(ids))

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != (n_pixels,):
                raise ValueError(f"labels must have {n_pixels} entries, got {labels.shape}")
            if labels.size and (np.any(labels < 0) or np.any(labels != np.round(labels))):
                raise ValueError("labels must be non-negative integers")
            object.__setattr__(self, "labels", _frozen(labels.astype(np.int64)))

        if self.wavelengths is not None:
            wl = np.array(self.wavelengths, dtype=np.float64, copy=True)
            if wl.shape != (n_bands,):
                raise ValueError(f"wavelengths must have {n_bands} entries")
            object.__setattr__(self, "wavelengths", _frozen(wl))

    @property
    def n_bands(self) -> int:
        return self.band_data.shape[0]

    @property
    def n_pixels(self) -> int:
        return self.band_data.shape[1]

    def band(self, band_id: int) -> np.ndarray:
        """Pixel vector of the band whose original id is ``band_id``."""
        pos = np.searchsorted(self.band_ids, band_id)
        if pos >= self.n_bands or self.band_ids[pos] != band_id:
            raise KeyError(band_id)
        return self.band_data[pos]

    def features(self, positions: Sequence[int]) -> np.ndarray:
        """``(N, len(positions))`` pixel features for 0-based band positions."""
        return self.band_data[np.asarray(positions, dtype=np.intp)].T

    def replace(self, **changes) -> "HsiCube":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class BandInterval:
    """Contiguous run of bands ``lo..hi`` (1-based, inclusive)."""

    lo: int
    hi: int

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise ValueError(f"invalid band interval [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, band: int) -> bool:
        return self.lo <= band <= self.hi


def remove_bands(cube: HsiCube, indexes: Iterable[int], strict: bool = True) -> HsiCube:
    """Drop the bands whose *original* ids are listed in ``indexes``.

    With ``strict=False`` ids that are already absent are ignored, which makes
    repeated removal of the same set idempotent.
    """
    drop = np.unique(np.asarray(list(indexes), dtype=np.int64))
    missing = drop[~np.isin(drop, cube.band_ids)]
    if missing.size and strict:
        raise ValueError(f"band ids not present in cube: {missing.tolist()}")
    drop = drop[np.isin(drop, cube.band_ids)]
    if drop.size == 0:
        return cube
    keep = ~np.isin(cube.band_ids, drop)
    if not keep.any():
        raise ValueError("removing these bands would leave an empty cube")
    return cube.replace(
        band_data=cube.band_data[keep],
        band_ids=cube.band_ids[keep],
        wavelengths=None if cube.wavelengths is None else cube.wavelengths[keep],
    )


def parse_band_ranges(text: str) -> list[int]:
    """Parse ``"104-108,150-163,220"`` into a list of ids."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError(f"bad band range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    return out


# --- HSIB -----------------------------------------------------------------


def write_hsib(cube: HsiCube, path: PathLike, dtype: str = "f64") -> None:
    if dtype not in _HSIB_DTYPES:
        raise ValueError(f"dtype must be one of {sorted(_HSIB_DTYPES)}")
    has_labels = int(cube.labels is not None)
    has_wl = int(cube.wavelengths is not None)
    header = f"{cube.n_rows} {cube.n_cols} {cube.n_bands} {dtype} {has_labels} {has_wl}\n"
    with open(path, "wb") as fh:
        fh.write(HSIB_MAGIC)
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(cube.band_data, dtype=_HSIB_DTYPES[dtype]).tobytes())
        if has_labels:
            if cube.labels.max(initial=0) > np.iinfo(np.uint32).max:
                raise ValueError("labels do not fit in uint32")
            fh.write(cube.labels.astype("<u4").tobytes())
        if has_wl:
            fh.write(cube.wavelengths.astype("<f8").tobytes())


def read_hsib(path: PathLike) -> HsiCube:
    raw = Path(path).read_bytes()
    if not raw.startswith(HSIB_MAGIC):
        raise CubeFormatError(f"{path}: missing HSIB1 magic line")
    end = raw.find(b"\n", len(HSIB_MAGIC))
    if end < 0:
        raise CubeFormatError(f"{path}: truncated header")
    fields = raw[len(HSIB_MAGIC):end].decode("ascii", errors="replace").split()
    if len(fields) != 6:
        raise CubeFormatError(f"{path}: header needs 6 fields, got {fields}")
    try:
        rows, cols, bands = (int(v) for v in fields[:3])
        has_labels, has_wl = int(fields[4]), int(fields[5])
    except ValueError as exc:
        raise CubeFormatError(f"{path}: bad header {fields}") from exc
    dtype = _HSIB_DTYPES.get(fields[3])
    if dtype is None:
        raise CubeFormatError(f"{path}: unknown dtype {fields[3]!r}")
    if min(rows, cols, bands) < 1 or has_labels not in (0, 1) or has_wl not in (0, 1):
        raise CubeFormatError(f"{path}: bad header {fields}")

    n = rows * cols
    sizes = [bands * n * dtype.itemsize, has_labels * n * 4, has_wl * bands * 8]
    body = memoryview(raw)[end + 1:]
    if len(body) != sum(sizes):
        raise CubeFormatError(
            f"{path}: payload is {len(body)} bytes, header implies {sum(sizes)}"
        )
    data = np.frombuffer(body[:sizes[0]], dtype=dtype).reshape(bands, n)
    off = sizes[0]
    labels = wavelengths = None
    if has_labels:
        labels = np.frombuffer(body[off:off + sizes[1]], dtype="<u4")
        off += sizes[1]
    if has_wl:
        wavelengths = np.frombuffer(body[off:off + sizes[2]], dtype="<f8")
    if not np.all(np.isfinite(data)):
        raise CubeFormatError(f"{path}: band data contains non-finite values")
    return HsiCube(data, rows, cols, labels=labels, wavelengths=wavelengths)


# --- CSV ------------------------------------------------------------------


def read_csv(
    path: PathLike,
    labels_path: Optional[PathLike] = None,
    shape: Optional[tuple[int, int]] = None,
) -> HsiCube:
    """Read an ``L x N`` CSV (one band per row).

    Without ``shape`` the image is taken to be a single row of N pixels.
    """
    try:
        data = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise CubeFormatError(f"{path}: {exc}") from exc
    if not np.all(np.isfinite(data)):
        raise CubeFormatError(f"{path}: band data contains non-finite values")
    rows, cols = shape if shape is not None else (1, data.shape[1])
    if rows * cols != data.shape[1]:
        raise CubeFormatError(f"{path}: {data.shape[1]} columns do not fit {rows}x{cols}")
    labels = None
    if labels_path is not None:
        try:
            labels = np.loadtxt(labels_path, delimiter=",", dtype=np.float64, ndmin=1)
        except ValueError as exc:
            raise CubeFormatError(f"{labels_path}: {exc}") from exc
        if labels.shape != (data.shape[1],):
            raise CubeFormatError(
                f"{labels_path}: {labels.size} labels for {data.shape[1]} pixels"
            )
        if np.any(labels < 0) or np.any(labels != np.round(labels)):
            raise CubeFormatError(f"{labels_path}: labels must be non-negative integers")
        labels = labels.astype(np.int64)
    return HsiCube(data, rows, cols, labels=labels)


def write_csv(cube: HsiCube, path: PathLike, labels_path: Optional[PathLike] = None) -> None:
    # repr-precision output, so CSV -> HSIB -> CSV is lossless for f64
    np.savetxt(path, cube.band_data, delimiter=",", fmt="%.17g")
    if labels_path is not None:
        if cube.labels is None:
            raise ValueError("cube has no labels to write")
        np.savetxt(labels_path, cube.labels, fmt="%d")


def load_cube(
    path: PathLike,
    format: Optional[str] = None,
    labels_path: Optional[PathLike] = None,
    shape: Optional[tuple[int, int]] = None,
) -> HsiCube:
    """Load a cube, inferring ``format`` from the suffix when not given."""
    fmt = format or ("csv" if str(path).lower().endswith(".csv") else "hsib")
    if fmt == "hsib":
        if labels_path is not None:
            raise ValueError("HSIB files carry their own labels")
        return read_hsib(path)
    if fmt == "csv":
        return read_csv(path, labels_path=labels_path, shape=shape)
    raise ValueError(f"unknown cube format {format!r}")


def write_cube(cube: HsiCube, path: PathLike, format: Optional[str] = None, **kwargs) -> None:
    fmt = format or ("csv" if str(path).lower().endswith(".csv") else "hsib")
    if fmt == "hsib":
        write_hsib(cube, path, **kwargs)
    elif fmt == "csv":
        write_csv(cube, path, **kwargs)
    else:
        raise ValueError(f"unknown cube format {format!r}")
