"""Normalization of raw metrics and the weighted Quality Index."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ParameterError

SPECTRAL = ("sam", "sid", "scp")
SPATIAL = ("ssim", "edge", "esr", "ref")
RAW_KEYS = SPECTRAL + SPATIAL + ("psnr", "rmse")


def default_weights() -> dict[str, float]:
    w = {k: 0.5 / len(SPECTRAL) for k in SPECTRAL}
    w.update({k: 0.5 / len(SPATIAL) for k in SPATIAL})
    return w


@dataclass(frozen=True)
class MetricConfig:
    ssim_window: int = 11
    ssim_sigma: float = 1.5
    ssim_k1: float = 0.01
    ssim_k2: float = 0.03
    epsilon: float = 1e-12
    weights: dict = field(default_factory=default_weights)

    def __post_init__(self):
        if self.ssim_window < 3 or self.ssim_window % 2 == 0:
            raise ParameterError(f"ssim_window must be odd and >= 3, got {self.ssim_window}")
        if not self.ssim_sigma > 0:
            raise ParameterError(f"ssim_sigma must be > 0, got {self.ssim_sigma}")
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be > 0, got {self.epsilon}")
        for k, v in self.weights.items():
            if k not in NORMALIZERS:
                raise ParameterError(f"metric {k!r} cannot be weighted; choose from {', '.join(NORMALIZERS)}")
            if not v >= 0:
                raise ParameterError(f"weight for {k!r} must be nonnegative, got {v}")


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


NORMALIZERS = {
    "sam": lambda v, ratio: 1.0 - _clamp01(v / (math.pi / 2.0)),
    "sid": lambda v, ratio: math.exp(-v),
    "scp": lambda v, ratio: (v + 1.0) / 2.0,
    "ssim": lambda v, ratio: (v + 1.0) / 2.0,
    "edge": lambda v, ratio: (v + 1.0) / 2.0,
    "esr": lambda v, ratio: _clamp01(v),
    "ref": lambda v, ratio: _clamp01(v / ratio),
}


def normalize(name: str, value: float, ratio: int = 1) -> float:
    """Map a raw metric onto [0, 1], higher meaning better."""
    return _clamp01(NORMALIZERS[name](value, ratio))


@dataclass
class MetricReport:
    raw: dict
    normalized: dict
    quality_index: float
    weights: dict
    notes: list = field(default_factory=list)
    reduced_reference: bool = False

    def to_dict(self) -> dict:
        """JSON-ready dict; numbers carry 9 significant digits and infinity is ``"inf"``."""
        out = {k: format_number(self.raw[k]) for k in RAW_KEYS if k in self.raw}
        out["quality_index"] = format_number(self.quality_index)
        out["weights"] = {k: format_number(v) for k, v in self.weights.items()}
        out["normalized"] = {k: format_number(v) for k, v in self.normalized.items()}
        out["reduced_reference"] = self.reduced_reference
        out["notes"] = list(self.notes)
        return out


def format_number(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return float(f"{v:.9g}")


def quality_index(raw: dict, cfg: MetricConfig | None = None, ratio: int = 1) -> MetricReport:
    """Weighted sum of normalized metrics.

    Weights are renormalized to sum to 1. A metric with zero weight may be
    absent from ``raw``; a metric with positive weight may not.
    """
    cfg = cfg or MetricConfig()
    total = math.fsum(cfg.weights.values())
    if not total > 0:
        raise ParameterError("weights must have a positive sum")
    weights = {k: v / total for k, v in cfg.weights.items()}
    missing = [k for k, v in weights.items() if v > 0 and k not in raw]
    if missing:
        raise ParameterError(f"weighted metrics missing from the raw values: {', '.join(missing)}")
    normalized = {k: normalize(k, raw[k], ratio) for k in NORMALIZERS if k in raw}
    qi = 0.0
    for k, w in weights.items():
        if w > 0:
            qi += w * normalized[k]
    return MetricReport(dict(raw), normalized, _clamp01(qi), weights)
