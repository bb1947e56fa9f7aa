"""Synthetic ground-truth scenes and Wald-protocol degradation.

Everything here is a pure function of its arguments. The random stream is a
64-bit linear congruential generator with fixed constants so the same seed
produces the same scene on every platform and in every language.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .kernels import conv_same
from .raster import Raster
from .stats import gaussian_kernel

_MASK = (1 << 64) - 1
LCG_MUL = 6364136223846793005
LCG_INC = 1442695040888963407


class Lcg:
    """``state' = state * 6364136223846793005 + 1442695040888963407 mod 2**64``.

    ``uniform()`` advances once and maps the top 53 bits to [0, 1).
    """

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state * LCG_MUL + LCG_INC) & _MASK
        return self.state

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * (1.0 / (1 << 53))
        return lo + (hi - lo) * u


@dataclass(frozen=True)
class SceneSpec:
    side: int = 128
    bands: int = 4
    n_blobs: int = 12
    n_shapes: int = 6
    seed: int = 42
    value_range: tuple[float, float] = (0.0, 255.0)

    def __post_init__(self):
        if self.side < 32 or self.side & (self.side - 1):
            raise ParameterError(f"side must be a power of two >= 32, got {self.side}")
        if self.bands < 2:
            raise ParameterError(f"bands must be >= 2, got {self.bands}")
        if self.n_blobs < 0 or self.n_shapes < 0:
            raise ParameterError("blob and shape counts must be >= 0")
        lo, hi = self.value_range
        if not lo < hi:
            raise ParameterError(f"value_range needs lo < hi, got {self.value_range}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["value_range"] = list(self.value_range)
        return d


@dataclass(frozen=True, eq=False)
class WaldTriple:
    ground_truth: Raster
    ms_low: Raster
    pan: Raster
    ratio: int


def generate_scene(spec: SceneSpec) -> Raster:
    """Render a ``bands x side x side`` scene.

    Layers, in draw order and LCG consumption order:

    1. per band: ramp axis (x if u < 0.5 else y), ramp start in [20, 80),
       ramp rise in [20, 80);
    2. per blob: center x, center y, sigma in [0.02, 0.08) * side, a base
       amplitude in [-60, 100), then one factor per band in [0.6, 1.4);
       base * factor is added to that band;
    3. per shape: kind (rectangle if u < 0.5 else disk), then for a rectangle
       x0, y0 in [0, 0.8) * side and width, height in [0.05, 0.25) * side, or
       for a disk center x, y and radius in [0.03, 0.15) * side; then a base
       value in [10, 245) and one factor per band in [0.75, 1.25); base *
       factor is painted over what is below.

    Signatures share a base level across bands, so bands are correlated the
    way real multispectral channels are, while each band still differs.

    Finally samples are clamped to ``value_range``.
    """
    rng = Lcg(spec.seed)
    n = spec.side
    lo, hi = spec.value_range
    scale = (hi - lo) / 255.0
    coord = np.arange(n, dtype=np.float64)
    t = coord / (n - 1)
    yy, xx = np.meshgrid(coord, coord, indexing="ij")
    img = np.empty((spec.bands, n, n))

    for b in range(spec.bands):
        along_x = rng.uniform() < 0.5
        start = rng.uniform(20.0, 80.0)
        rise = rng.uniform(20.0, 80.0)
        ramp = start + rise * t
        img[b] = ramp[None, :] if along_x else ramp[:, None]

    for _ in range(spec.n_blobs):
        cx = rng.uniform(0.0, n)
        cy = rng.uniform(0.0, n)
        sigma = rng.uniform(0.02, 0.08) * n
        base = rng.uniform(-60.0, 100.0)
        amps = [base * rng.uniform(0.6, 1.4) for _ in range(spec.bands)]
        g = np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2.0 * sigma * sigma))
        for b in range(spec.bands):
            img[b] += amps[b] * g

    for _ in range(spec.n_shapes):
        if rng.uniform() < 0.5:
            x0 = rng.uniform(0.0, 0.8) * n
            y0 = rng.uniform(0.0, 0.8) * n
            w = rng.uniform(0.05, 0.25) * n
            h = rng.uniform(0.05, 0.25) * n
            mask = (xx >= x0) & (xx < x0 + w) & (yy >= y0) & (yy < y0 + h)
        else:
            cx = rng.uniform(0.0, n)
            cy = rng.uniform(0.0, n)
            rad = rng.uniform(0.03, 0.15) * n
            mask = (xx - cx) ** 2 + (yy - cy) ** 2 <= rad * rad
        base = rng.uniform(10.0, 245.0)
        values = [base * rng.uniform(0.75, 1.25) for _ in range(spec.bands)]
        for b in range(spec.bands):
            img[b][mask] = values[b]

    img = lo + img * scale
    return Raster(np.clip(img, lo, hi), None, (lo, hi))


def simulate_pan(gt: Raster, weights: Sequence[float] | None = None) -> Raster:
    """Weighted band sum; weights are renormalized to sum to 1."""
    if weights is None:
        weights = [1.0] * gt.bands
    w = [float(x) for x in weights]
    if len(w) != gt.bands:
        raise ParameterError(f"expected {gt.bands} pan weights, got {len(w)}")
    if any(x < 0 for x in w) or not sum(w) > 0:
        raise ParameterError("pan weights must be nonnegative with a positive sum")
    total = math.fsum(w)
    w = [x / total for x in w]
    acc = w[0] * gt.data[0]
    for b in range(1, gt.bands):
        acc = acc + w[b] * gt.data[b]
    return Raster(acc, None, gt.nominal_range)


def degrade_band(band: np.ndarray, ratio: int) -> np.ndarray:
    """Gaussian blur (sigma = ratio/2, truncated at 3 sigma, edge-replicated)
    then keep every ``ratio``-th sample starting at ``(ratio - 1) // 2``."""
    blurred = conv_same(band, gaussian_kernel(ratio / 2.0))
    off = (ratio - 1) // 2
    return blurred[off::ratio, off::ratio]


def wald_degrade(gt: Raster, ratio: int) -> Raster:
    if ratio < 2:
        raise ParameterError(f"degradation ratio must be >= 2, got {ratio}")
    if gt.width % ratio or gt.height % ratio:
        raise ParameterError(f"dims {gt.width}x{gt.height} are not divisible by ratio {ratio}")
    return gt.with_data(np.stack([degrade_band(gt.data[b], ratio) for b in range(gt.bands)]))


def make_wald_triple(spec: SceneSpec, ratio: int = 2, pan_weights: Sequence[float] | None = None) -> WaldTriple:
    gt = generate_scene(spec)
    return WaldTriple(
        ground_truth=gt,
        ms_low=wald_degrade(gt, ratio),
        pan=simulate_pan(gt, pan_weights),
        ratio=ratio,
    )
