"""Resampling, integer-shift registration, radiometric calibration and
dark-object subtraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, ParameterError
from .kernels import ncc_scores
from .raster import Raster


@dataclass(frozen=True)
class CalibrationParams:
    gains: tuple[float, ...]
    offsets: tuple[float, ...]

    def __post_init__(self):
        gains = tuple(float(g) for g in self.gains)
        offsets = tuple(float(o) for o in self.offsets)
        if len(gains) != len(offsets):
            raise ParameterError(f"{len(gains)} gains but {len(offsets)} offsets")
        if any(g == 0.0 for g in gains):
            raise ParameterError("calibration gains must be nonzero")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "offsets", offsets)


@dataclass(frozen=True)
class ShiftEstimate:
    """Translation of a moving image relative to a reference.

    ``moving(x, y) ~= reference(x - dx, y - dy)``; undo it with
    ``apply_shift(moving, -dx, -dy)``.
    """

    dx: int
    dy: int
    score: float


def _axis_map(n_src: int, n_dst: int):
    t = np.arange(n_dst, dtype=np.float64)
    s = (t + 0.5) * (n_src / n_dst) - 0.5
    return np.clip(s, 0.0, n_src - 1)


def resample(r: Raster, target_w: int, target_h: int, method: str = "bilinear") -> Raster:
    """Resize to ``target_w x target_h`` using pixel-center coordinate mapping."""
    if target_w < 1 or target_h < 1:
        raise ParameterError(f"target dims must be >= 1, got {target_w}x{target_h}")
    if (target_w, target_h) == (r.width, r.height):
        return r.with_data(r.data)
    sy = _axis_map(r.height, target_h)
    sx = _axis_map(r.width, target_w)
    if method == "nearest":
        iy = np.floor(sy + 0.5).astype(np.intp)
        ix = np.floor(sx + 0.5).astype(np.intp)
        out = r.data[:, iy][:, :, ix]
    elif method == "bilinear":
        y0 = np.floor(sy).astype(np.intp)
        x0 = np.floor(sx).astype(np.intp)
        y1 = np.minimum(y0 + 1, r.height - 1)
        x1 = np.minimum(x0 + 1, r.width - 1)
        fy = (sy - y0)[:, None]
        fx = (sx - x0)[None, :]
        d = r.data
        top = d[:, y0][:, :, x0] * (1.0 - fx) + d[:, y0][:, :, x1] * fx
        bot = d[:, y1][:, :, x0] * (1.0 - fx) + d[:, y1][:, :, x1] * fx
        out = top * (1.0 - fy) + bot * fy
    else:
        raise ParameterError(f"unknown resampling method {method!r}")
    return r.with_data(out)


def estimate_shift(reference_intensity: Raster, moving_intensity: Raster, max_shift: int) -> ShiftEstimate:
    """Exhaustive integer-translation search maximizing normalized cross-correlation.

    Every candidate is scored on the same central window of the moving image
    (a ``max_shift`` margin is dropped on each side), so scores are comparable
    and replicated borders from a previous shift never enter the score.
    """
    if reference_intensity.bands != 1 or moving_intensity.bands != 1:
        raise ParameterError("estimate_shift expects single-band intensity rasters")
    if not reference_intensity.same_grid(moving_intensity):
        raise ParameterError("reference and moving rasters must share dimensions")
    m = int(max_shift)
    if m < 0:
        raise ParameterError(f"max_shift must be >= 0, got {max_shift}")
    H, W = moving_intensity.height, moving_intensity.width
    if H - 2 * m < 2 or W - 2 * m < 2:
        raise ParameterError(f"image {W}x{H} too small for max_shift {m}")

    mov = moving_intensity.data[0]
    win = mov[m:H - m, m:W - m]
    if win.max() == win.min():
        raise DegenerateInputError("moving image has zero variance over the scoring window")

    scores = ncc_scores(reference_intensity.data[0], mov, m)
    best = None
    for dy in range(-m, m + 1):
        for dx in range(-m, m + 1):
            s = scores[dy + m, dx + m]
            if math.isnan(s):
                continue
            key = (-s, abs(dx) + abs(dy), dy, dx)
            if best is None or key < best[0]:
                best = (key, dx, dy, s)
    if best is None:
        raise DegenerateInputError("reference image has zero variance for every candidate shift")
    _, dx, dy, s = best
    return ShiftEstimate(dx, dy, float(s))


def apply_shift(r: Raster, dx: int, dy: int) -> Raster:
    """Translate content by (dx, dy); vacated margins replicate the edge."""
    dx, dy = int(dx), int(dy)
    if abs(dx) >= r.width or abs(dy) >= r.height:
        raise ParameterError(f"shift ({dx}, {dy}) exceeds raster dims {r.width}x{r.height}")
    iy = np.clip(np.arange(r.height) - dy, 0, r.height - 1)
    ix = np.clip(np.arange(r.width) - dx, 0, r.width - 1)
    return r.with_data(r.data[:, iy][:, :, ix])


def radiometric_calibrate(r: Raster, p: CalibrationParams) -> Raster:
    if len(p.gains) != r.bands:
        raise ParameterError(f"calibration has {len(p.gains)} bands, raster has {r.bands}")
    g = np.asarray(p.gains)[:, None, None]
    o = np.asarray(p.offsets)[:, None, None]
    return r.with_data(g * r.data + o)


def nearest_rank_quantile(values: np.ndarray, q: float) -> float:
    """Lower empirical quantile: the ceil(q*n)-th smallest value (at least the 1st)."""
    v = np.sort(np.asarray(values, dtype=np.float64).reshape(-1))
    rank = max(int(math.ceil(q * v.size)), 1)
    return float(v[rank - 1])


def dos_correct(r: Raster, percentile: float = 0.01) -> Raster:
    """Dark-object subtraction: remove each band's low quantile, clamping at 0."""
    if not 0.0 <= percentile <= 0.5:
        raise ParameterError(f"percentile must lie in [0, 0.5], got {percentile}")
    out = np.empty_like(r.data)
    for b in range(r.bands):
        dark = nearest_rank_quantile(r.data[b], percentile)
        out[b] = np.maximum(r.data[b] - dark, 0.0)
    return r.with_data(out)


def calibration(gains: Sequence[float], offsets: Sequence[float] | None = None) -> CalibrationParams:
    if offsets is None:
        offsets = [0.0] * len(gains)
    return CalibrationParams(tuple(gains), tuple(offsets))
