"""Spectral-fidelity metrics: SAM, SID, spectral content preservation."""

from __future__ import annotations


import numpy as np

from ..dataset import degrade_band
from ..errors import DegenerateInputError, ParameterError
from ..kernels import seq_sum
from ..raster import Raster
from ..stats import pearson, std

NORM_FLOOR = 1e-12


def _check_pair(a: Raster, b: Raster, min_bands: int = 1):
    if a.shape != b.shape:
        raise ParameterError(f"raster shapes differ: {a.shape} vs {b.shape}")
    if a.bands < min_bands:
        raise ParameterError(f"metric needs at least {min_bands} bands, got {a.bands}")


def _band_sum(planes) -> np.ndarray:
    acc = planes[0]
    for p in planes[1:]:
        acc = acc + p
    return acc


def sam_map(fused: Raster, reference: Raster) -> np.ndarray:
    """Per-pixel spectral angle in radians; NaN where either spectrum is ~0."""
    _check_pair(fused, reference, 2)
    f, r = fused.data, reference.data
    nb = f.shape[0]
    nf = np.sqrt(_band_sum([f[b] * f[b] for b in range(nb)]))
    nr = np.sqrt(_band_sum([r[b] * r[b] for b in range(nb)]))
    ok = (nf >= NORM_FLOOR) & (nr >= NORM_FLOOR)
    sf = np.where(ok, nf, 1.0)
    sr = np.where(ok, nr, 1.0)
    # half-angle form on unit vectors; arccos of the cosine loses ~1e-8 near 0
    u = [f[b] / sf for b in range(nb)]
    v = [r[b] / sr for b in range(nb)]
    diff = np.sqrt(_band_sum([(u[b] - v[b]) ** 2 for b in range(nb)]))
    summ = np.sqrt(_band_sum([(u[b] + v[b]) ** 2 for b in range(nb)]))
    ang = 2.0 * np.arctan2(diff, summ)
    ang[~ok] = np.nan
    return ang


def sam(fused: Raster, reference: Raster) -> float:
    """Mean spectral angle (radians) over pixels with non-vanishing spectra."""
    ang = sam_map(fused, reference)
    kept = ang[~np.isnan(ang)]
    if kept.size == 0:
        raise DegenerateInputError("every pixel has a zero-norm spectrum; SAM is undefined")
    return seq_sum(kept) / kept.size


def sid_with_shift(fused: Raster, reference: Raster, epsilon: float = 1e-12) -> tuple[float, float]:
    """SID plus the offset added to make both images nonnegative (0.0 if none)."""
    _check_pair(fused, reference, 2)
    f, r = fused.data, reference.data
    low = min(float(f.min()), float(r.min()))
    shift = -low if low < 0.0 else 0.0
    if shift:
        f, r = f + shift, r + shift
    f = np.maximum(f, epsilon)
    r = np.maximum(r, epsilon)
    nb = f.shape[0]
    sf = _band_sum([f[b] for b in range(nb)])
    sr = _band_sum([r[b] for b in range(nb)])
    terms = []
    for b in range(nb):
        p = f[b] / sf
        q = r[b] / sr
        terms.append((p - q) * (np.log(p) - np.log(q)))
    per_pixel = _band_sum(terms)
    return seq_sum(per_pixel) / per_pixel.size, shift


def sid(fused: Raster, reference: Raster, epsilon: float = 1e-12) -> float:
    """Spectral information divergence in nats (symmetric KL, lower is better)."""
    return sid_with_shift(fused, reference, epsilon)[0]


def degrade_to(fused: Raster, ratio: int) -> Raster:
    """Wald-style reduction onto the MS grid; identity for ratio 1."""
    if ratio == 1:
        return fused
    return fused.with_data(np.stack([degrade_band(fused.data[b], ratio) for b in range(fused.bands)]))


def spectral_content_preservation(fused: Raster, ms_original: Raster, ratio: int) -> float:
    """Mean per-band Pearson correlation between the degraded fused image and the original MS."""
    ratio = int(ratio)
    if ratio < 1:
        raise ParameterError(f"ratio must be >= 1, got {ratio}")
    if fused.bands != ms_original.bands:
        raise ParameterError(f"band counts differ: {fused.bands} vs {ms_original.bands}")
    if (fused.width, fused.height) != (ms_original.width * ratio, ms_original.height * ratio):
        raise ParameterError(
            f"fused {fused.width}x{fused.height} is not ms {ms_original.width}x{ms_original.height} x ratio {ratio}"
        )
    low = degrade_to(fused, ratio)
    corrs = []
    for b in range(fused.bands):
        x, y = low.data[b], ms_original.data[b]
        if std(x) < NORM_FLOOR or std(y) < NORM_FLOOR:
            continue
        corrs.append(pearson(x, y))
    if not corrs:
        raise DegenerateInputError("every band is constant; spectral content preservation is undefined")
    return seq_sum(np.array(corrs)) / len(corrs)
