"""Per-sample error metrics."""

import math


from ..kernels import seq_sum
from ..raster import Raster
from .spectral import _check_pair


def rmse(a: Raster, b: Raster) -> float:
    _check_pair(a, b)
    d = a.data - b.data
    return math.sqrt(seq_sum(d * d) / d.size)


def psnr(a: Raster, b: Raster) -> float:
    """PSNR in dB over ``a``'s nominal range; ``inf`` for identical inputs."""
    e = rmse(a, b)
    if e == 0.0:
        return math.inf
    return 20.0 * math.log10(a.span / e)
