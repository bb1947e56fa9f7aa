"""Immutable multi-band raster values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import RasterError

DEFAULT_RANGE = (0.0, 255.0)


@dataclass(frozen=True, eq=False)
class Raster:
    """A ``bands x height x width`` block of float64 samples.

    Storage is band-sequential (all of band 0, then band 1, ...), each band
    row-major. The sample array is read-only; operations return new rasters.
    ``nominal_range`` is the dynamic range assumed by SSIM and PSNR. It is
    metadata only and never clamps the samples.
    """

    data: np.ndarray
    band_names: tuple[str, ...] | None = None
    nominal_range: tuple[float, float] = field(default=DEFAULT_RANGE)

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            arr = arr[np.newaxis]
        if arr.ndim != 3 or min(arr.shape) < 1:
            raise RasterError(f"raster data must be (bands, height, width), got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise RasterError("raster samples must be finite")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

        lo, hi = (float(v) for v in self.nominal_range)
        if not lo < hi:
            raise RasterError(f"nominal_range needs lo < hi, got ({lo}, {hi})")
        object.__setattr__(self, "nominal_range", (lo, hi))

        if self.band_names is not None:
            names = tuple(str(n) for n in self.band_names)
            if len(names) != arr.shape[0]:
                raise RasterError(f"expected {arr.shape[0]} band names, got {len(names)}")
            object.__setattr__(self, "band_names", names)

    @property
    def bands(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    @property
    def span(self) -> float:
        return self.nominal_range[1] - self.nominal_range[0]

    @property
    def samples(self) -> np.ndarray:
        """Flat band-sequential view of the samples."""
        return self.data.reshape(-1)

    def band(self, b: int) -> Raster:
        names = None if self.band_names is None else (self.band_names[b],)
        return Raster(self.data[b], names, self.nominal_range)

    def with_data(self, data: np.ndarray, keep_names: bool = True) -> Raster:
        """New raster sharing this one's metadata."""
        data = np.asarray(data, dtype=np.float64)
        nb = 1 if data.ndim == 2 else data.shape[0]
        names = self.band_names if keep_names and nb == self.bands else None
        return Raster(data, names, self.nominal_range)

    def same_grid(self, other: Raster) -> bool:
        return self.height == other.height and self.width == other.width

    def identical(self, other: Raster) -> bool:
        """Bit-exact equality of samples and metadata."""
        return (
            self.shape == other.shape
            and self.band_names == other.band_names
            and self.nominal_range == other.nominal_range
            and self.data.tobytes() == other.data.tobytes()
        )

    def __repr__(self):
        return (
            f"Raster(bands={self.bands}, height={self.height}, width={self.width}, "
            f"nominal_range={self.nominal_range})"
        )


def make_raster(
    width: int,
    height: int,
    bands: int,
    samples: Sequence[float] | np.ndarray,
    band_names: Sequence[str] | None = None,
    nominal_range: tuple[float, float] = DEFAULT_RANGE,
) -> Raster:
    """Build a raster from a flat band-sequential sample sequence."""
    if width < 1 or height < 1 or bands < 1:
        raise RasterError(f"dimensions must be >= 1, got {width}x{height}x{bands}")
    flat = np.asarray(samples, dtype=np.float64).reshape(-1)
    expected = width * height * bands
    if flat.size != expected:
        raise RasterError(f"expected {expected} samples, got {flat.size}")
    return Raster(flat.reshape(bands, height, width), band_names, nominal_range)


def to_intensity(r: Raster) -> Raster:
    """Unweighted per-pixel mean over bands, as a one-band raster."""
    acc = r.data[0].copy()
    for b in range(1, r.bands):
        acc = acc + r.data[b]
    if r.bands > 1:
        acc = acc / r.bands
    return Raster(acc, None, r.nominal_range)


@dataclass(frozen=True, eq=False)
class FusionInputs:
    """A registered multispectral/panchromatic pair on the same grid.

    ``ratio`` is the original pan-to-MS resolution ratio; the MS raster has
    already been resampled onto the pan grid.
    """

    ms: Raster
    pan: Raster
    ratio: int = 1

    def __post_init__(self):
        if self.pan.bands != 1:
            raise RasterError(f"pan must have exactly 1 band, got {self.pan.bands}")
        if not self.ms.same_grid(self.pan):
            raise RasterError(
                f"ms grid {self.ms.width}x{self.ms.height} differs from pan grid "
                f"{self.pan.width}x{self.pan.height}"
            )
        if int(self.ratio) != self.ratio or self.ratio < 1:
            raise RasterError(f"ratio must be a positive integer, got {self.ratio}")
        object.__setattr__(self, "ratio", int(self.ratio))
