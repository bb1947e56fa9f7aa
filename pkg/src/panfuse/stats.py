"""Sequential-order statistics.

Means, variances and correlations accumulate strictly left to right over the
row-major samples, so results do not depend on numpy's summation strategy.
"""

import math

import numpy as np

from .kernels import seq_sum


def mean(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return seq_sum(x) / x.size


def var(x, ddof: int = 1) -> float:
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n - ddof <= 0:
        return 0.0
    d = x - mean(x)
    return seq_sum(d * d) / (n - ddof)


def std(x, ddof: int = 1) -> float:
    return math.sqrt(var(x, ddof))


def pearson(x, y) -> float:
    """Pearson correlation; NaN when either side has no spread."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    a = x - mean(x)
    b = y - mean(y)
    sxx = seq_sum(a * a)
    syy = seq_sum(b * b)
    if sxx <= 0.0 or syy <= 0.0:
        return math.nan
    return seq_sum(a * b) / math.sqrt(sxx * syy)


def gaussian_kernel(sigma: float, radius: int | None = None) -> np.ndarray:
    """Normalized 1-D Gaussian taps truncated at ``radius`` (default ceil(3 sigma))."""
    if radius is None:
        radius = int(math.ceil(3.0 * sigma))
    t = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(t * t) / (2.0 * sigma * sigma))
    return k / seq_sum(k)
