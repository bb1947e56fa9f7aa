"""Spatial-enhancement metrics: SSIM, gradient edge preservation, and a
spectral resolution proxy (``mtf50``) used by ESR and REF."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateInputError, ParameterError
from ..kernels import conv_valid, seq_sum, sobel_mag
from ..raster import Raster
from ..stats import pearson


def _single(r: Raster, name: str):
    if r.bands != 1:
        raise ParameterError(f"{name} expects a single-band raster, got {r.bands} bands")


def ssim_window(side: int, sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps; the 2-D window is their outer product."""
    if side < 3 or side % 2 == 0:
        raise ParameterError(f"SSIM window must be odd and >= 3, got {side}")
    if not sigma > 0:
        raise ParameterError(f"SSIM sigma must be > 0, got {sigma}")
    t = np.arange(side, dtype=np.float64) - side // 2
    g = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return g / seq_sum(g)


def ssim_map(a: Raster, b: Raster, window: int = 11, sigma: float = 1.5,
             k1: float = 0.01, k2: float = 0.03) -> np.ndarray:
    _single(a, "ssim")
    _single(b, "ssim")
    if not a.same_grid(b):
        raise ParameterError("ssim inputs must share dimensions")
    if a.width < window or a.height < window:
        raise ParameterError(f"image {a.width}x{a.height} is smaller than the {window}x{window} SSIM window")
    g = ssim_window(window, sigma)
    x, y = a.data[0], b.data[0]
    span = a.span
    c1 = (k1 * span) ** 2
    c2 = (k2 * span) ** 2
    mx = conv_valid(x, g)
    my = conv_valid(y, g)
    mxx = mx * mx
    myy = my * my
    mxy = mx * my
    sxx = conv_valid(x * x, g) - mxx
    syy = conv_valid(y * y, g) - myy
    sxy = conv_valid(x * y, g) - mxy
    return ((2.0 * mxy + c1) * (2.0 * sxy + c2)) / ((mxx + myy + c1) * (sxx + syy + c2))


def ssim(a: Raster, b: Raster, cfg=None) -> float:
    """Mean Gaussian-windowed SSIM over all fully-covered window positions.

    The dynamic range comes from ``a.nominal_range``.
    """
    if cfg is None:
        m = ssim_map(a, b)
    else:
        m = ssim_map(a, b, cfg.ssim_window, cfg.ssim_sigma, cfg.ssim_k1, cfg.ssim_k2)
    return seq_sum(m) / m.size


def edge_preservation(fused_intensity: Raster, pan: Raster) -> float:
    """Correlation of 3x3 Sobel gradient magnitudes (border pixels excluded)."""
    _single(fused_intensity, "edge_preservation")
    _single(pan, "edge_preservation")
    if not fused_intensity.same_grid(pan):
        raise ParameterError("edge_preservation inputs must share dimensions")
    if min(pan.width, pan.height) < 3:
        raise ParameterError("edge_preservation needs images of at least 3x3")
    c = pearson(sobel_mag(fused_intensity.data[0]), sobel_mag(pan.data[0]))
    if math.isnan(c):
        raise DegenerateInputError("gradient magnitude map is constant; edge correlation undefined")
    return c


def _hann(n: int) -> np.ndarray:
    # periodic Hann
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)


def radial_profile(img: Raster) -> np.ndarray:
    """Radially averaged power spectrum of the mean-removed, Hann-windowed image.

    One bin per 1/side cycles/pixel (bin k collects radii rounding to k),
    bins 0..side/2; corner frequencies beyond Nyquist are dropped.
    """
    _single(img, "mtf50")
    n = img.width
    if img.height != n or n < 16 or n & (n - 1):
        raise ParameterError(f"mtf50 needs a square power-of-two image with side >= 16, got {img.width}x{img.height}")
    x = img.data[0]
    x = x - seq_sum(x) / x.size
    w = _hann(n)
    spec = np.fft.fft2(x * np.outer(w, w))
    power = spec.real ** 2 + spec.imag ** 2
    f = np.fft.fftfreq(n)
    rad = np.sqrt(f[:, None] ** 2 + f[None, :] ** 2)
    idx = np.floor(rad * n + 0.5).astype(np.intp)
    nbins = n // 2 + 1
    keep = idx < nbins
    sums = np.bincount(idx[keep], weights=power[keep], minlength=nbins)
    counts = np.bincount(idx[keep], minlength=nbins)
    return sums / counts


def gradient_profile(img: Raster) -> np.ndarray:
    """Radial power profile weighted by f**2, i.e. the spectrum of the image gradient.

    Edges have a 1/f**2 power spectrum, so this weighting leaves the imaging
    response (MTF squared) as the dominant shape for edge content.
    """
    prof = radial_profile(img)
    f = np.arange(prof.size, dtype=np.float64) / img.width
    return prof * f * f


def mtf50(img: Raster) -> float:
    """Resolution proxy in cycles/pixel.

    The half-power frequency of the gradient spectrum: the radial frequency
    below which half of the f**2-weighted, radially averaged power lies,
    linearly interpolated inside the bin that crosses. Bins are 1/side wide and
    centered on k/side, up to Nyquist. An image with no spectral content
    returns 0.
    """
    g = gradient_profile(img)[1:]
    n = img.width
    total = seq_sum(g)
    if not total > 0.0:
        return 0.0
    half = 0.5 * total
    acc = 0.0
    for i, v in enumerate(g):
        if acc + v >= half:
            # g[i] is bin k = i + 1, spanning [k - 0.5, k + 0.5) / n
            return (i + 0.5 + (half - acc) / v) / n
        acc += v
    return 0.5


def esr(fused_intensity: Raster, reference_intensity: Raster) -> float:
    ref = mtf50(reference_intensity)
    if ref == 0.0:
        raise DegenerateInputError("reference image has no spectral content; ESR undefined")
    return min(max(mtf50(fused_intensity) / ref, 0.0), 1.5)


def resolution_enhancement_factor(fused_intensity: Raster, ms_up_intensity: Raster) -> float:
    if not fused_intensity.same_grid(ms_up_intensity):
        raise ParameterError("REF inputs must share dimensions")
    base = mtf50(ms_up_intensity)
    if base == 0.0:
        raise DegenerateInputError("upsampled MS has no spectral content; REF undefined")
    return mtf50(fused_intensity) / base
