"""Multilevel orthonormal 2-D Haar transform.

On a 2x2 block ``[[a, b], [c, d]]``::

    LL = (a + b + c + d) / 2    LH = (a - b + c - d) / 2
    HL = (a + b - c - d) / 2    HH = (a - b - c + d) / 2

Odd dimensions are padded by edge replication before each level; the
pre-padding shape is kept so the inverse crops back exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from ..kernels import haar_fwd, haar_inv
from ..raster import Raster


@dataclass(frozen=True, eq=False)
class WaveletPyramid:
    levels: int
    approximation: Raster
    # details[0] is the finest level
    details: tuple[tuple[Raster, Raster, Raster], ...]
    # (height, width) of the input to each level, before padding
    shapes: tuple[tuple[int, int], ...]

    def with_details(self, details) -> WaveletPyramid:
        return WaveletPyramid(self.levels, self.approximation, tuple(details), self.shapes)

    def with_approximation(self, approximation: Raster) -> WaveletPyramid:
        return WaveletPyramid(self.levels, approximation, self.details, self.shapes)


def max_levels(width: int, height: int) -> int:
    return int(math.floor(math.log2(min(width, height))))


def dwt2(r: Raster, levels: int) -> WaveletPyramid:
    limit = max_levels(r.width, r.height)
    if not 1 <= levels <= limit:
        raise ParameterError(f"levels must lie in [1, {limit}] for a {r.width}x{r.height} raster, got {levels}")
    cur = r.data
    details = []
    shapes = []
    for _ in range(levels):
        h, w = cur.shape[1:]
        shapes.append((h, w))
        if h % 2 or w % 2:
            cur = np.pad(cur, ((0, 0), (0, h % 2), (0, w % 2)), mode="edge")
        subs = [haar_fwd(cur[b]) for b in range(r.bands)]
        ll, lh, hl, hh = (np.stack([s[i] for s in subs]) for i in range(4))
        details.append(tuple(r.with_data(x, keep_names=True) for x in (lh, hl, hh)))
        cur = ll
    return WaveletPyramid(levels, r.with_data(cur), tuple(details), tuple(shapes))


def idwt2(p: WaveletPyramid) -> Raster:
    cur = p.approximation.data
    for level in range(p.levels - 1, -1, -1):
        lh, hl, hh = (d.data for d in p.details[level])
        cur = np.stack([haar_inv(cur[b], lh[b], hl[b], hh[b]) for b in range(cur.shape[0])])
        h, w = p.shapes[level]
        cur = cur[:, :h, :w]
    return p.approximation.with_data(cur)
