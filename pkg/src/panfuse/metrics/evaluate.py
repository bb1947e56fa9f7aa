"""Full metric suite for one fused image."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateInputError, ParameterError
from ..preprocess import resample
from ..raster import Raster, to_intensity
from .pixel import psnr, rmse
from .quality import MetricConfig, MetricReport, quality_index
from .spatial import edge_preservation, esr, resolution_enhancement_factor, ssim
from .spectral import sam, sid_with_shift, spectral_content_preservation


def band_ssim(a: Raster, b: Raster, cfg: MetricConfig | None = None) -> float:
    """Mean of the per-band SSIM values."""
    vals = [ssim(a.band(i), b.band(i), cfg) for i in range(a.bands)]
    return float(np.mean(vals)) if len(vals) > 1 else vals[0]


def _mtf_ready(r: Raster) -> bool:
    n = r.width
    return r.height == n and n >= 16 and not n & (n - 1)


def evaluate(fused: Raster, ms: Raster, pan: Raster, ratio: int,
             ground_truth: Raster | None = None, cfg: MetricConfig | None = None) -> MetricReport:
    """Score ``fused`` against the ground truth, or against the upsampled MS.

    Without ground truth the report is flagged ``reduced_reference``. Metrics
    that do not apply to the inputs (e.g. the resolution proxies on a
    non-square image) are skipped and listed in the notes, and their weights
    are dropped.
    """
    cfg = cfg or MetricConfig()
    notes = []
    if not fused.same_grid(pan):
        raise ParameterError("fused image and pan must share a grid")
    ms_up = ms if ms.same_grid(pan) else resample(ms, pan.width, pan.height, "bilinear")
    reference = ground_truth if ground_truth is not None else ms_up
    if reference.shape != fused.shape:
        raise ParameterError(f"reference shape {reference.shape} differs from fused {fused.shape}")
    fi = to_intensity(fused)

    raw = {}
    if fused.bands >= 2:
        raw["sam"] = sam(fused, reference)
        raw["sid"], shift = sid_with_shift(fused, reference, cfg.epsilon)
        if shift:
            notes.append(f"sid: samples shifted by {shift:.9g} to make them nonnegative")
    else:
        notes.append("sam, sid: skipped for single-band imagery")
    scp_ratio = ratio if not ms.same_grid(pan) else 1
    try:
        raw["scp"] = spectral_content_preservation(fused, ms, scp_ratio)
    except DegenerateInputError as exc:
        notes.append(f"scp: skipped ({exc})")
    raw["ssim"] = band_ssim(fused, reference, cfg)
    try:
        raw["edge"] = edge_preservation(fi, pan)
    except DegenerateInputError as exc:
        notes.append(f"edge: skipped ({exc})")
    if _mtf_ready(fused):
        try:
            raw["esr"] = esr(fi, to_intensity(reference))
        except DegenerateInputError as exc:
            notes.append(f"esr: skipped ({exc})")
        try:
            raw["ref"] = resolution_enhancement_factor(fi, to_intensity(ms_up))
        except DegenerateInputError as exc:
            notes.append(f"ref: skipped ({exc})")
    else:
        notes.append("esr, ref: skipped (need a square power-of-two image of side >= 16)")
    raw["psnr"] = psnr(fused, reference)
    raw["rmse"] = rmse(fused, reference)

    weights = {k: v for k, v in cfg.weights.items() if k in raw or v == 0}
    dropped = sorted(set(cfg.weights) - set(weights))
    if dropped:
        notes.append(f"weights dropped for unavailable metrics: {', '.join(dropped)}")
    qcfg = MetricConfig(cfg.ssim_window, cfg.ssim_sigma, cfg.ssim_k1, cfg.ssim_k2, cfg.epsilon, weights)
    report = quality_index(raw, qcfg, ratio)
    report.notes = notes
    report.reduced_reference = ground_truth is None
    return report


__all__ = ["MetricReport", "band_ssim", "evaluate"]
