"""Brovey, IHS, PCA and Haar-wavelet pan-sharpening, plus cascading."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ..errors import DegenerateInputError, PanfuseError, ParameterError, UnsupportedBandCountError
from ..raster import FusionInputs, Raster, to_intensity
from ..stats import mean, std
from .haar import dwt2, idwt2
from .pca import fit_pca, pca_forward, pca_inverse

STD_FLOOR = 1e-12
PCA_MODES = ("substitute", "paper_literal")

# options accepted per tag, with defaults
_DEFAULTS: dict[str, dict[str, Any]] = {
    "brovey": {},
    "ihs": {"match": True},
    "pca": {"mode": "substitute", "match": True},
    "wavelet": {"levels": None, "match": True},
}
TAGS = tuple(_DEFAULTS)


@dataclass(frozen=True)
class FusionMethod:
    tag: str
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in _DEFAULTS:
            raise ParameterError(f"unknown fusion method {self.tag!r}; expected one of {', '.join(TAGS)}")
        unknown = set(self.options) - set(_DEFAULTS[self.tag])
        if unknown:
            raise ParameterError(f"options {sorted(unknown)} are not valid for {self.tag}")
        opts = {**_DEFAULTS[self.tag], **self.options}
        if "mode" in opts and opts["mode"] not in PCA_MODES:
            raise ParameterError(f"pca mode must be one of {PCA_MODES}, got {opts['mode']!r}")
        if opts.get("levels") is not None and int(opts["levels"]) < 1:
            raise ParameterError(f"wavelet levels must be >= 1, got {opts['levels']}")
        object.__setattr__(self, "options", opts)

    @classmethod
    def from_options(cls, tag: str, **options) -> FusionMethod:
        """Build a method keeping only the options that apply to ``tag``."""
        if tag not in _DEFAULTS:
            raise ParameterError(f"unknown fusion method {tag!r}; expected one of {', '.join(TAGS)}")
        keep = {k: v for k, v in options.items() if k in _DEFAULTS[tag] and v is not None}
        return cls(tag, keep)


def match_moments(src: Raster, ref: Raster) -> Raster:
    """Affinely rescale ``src`` to the mean and (n-1) std of ``ref``.

    When ``src`` is (near) constant only the offset is applied.
    """
    if src.bands != 1 or ref.bands != 1 or not src.same_grid(ref):
        raise ParameterError("match_moments expects two single-band rasters on the same grid")
    m_src, m_ref = mean(src.data), mean(ref.data)
    s_src = std(src.data)
    if s_src < STD_FLOOR:
        return src.with_data(src.data - m_src + m_ref)
    return src.with_data((src.data - m_src) * (std(ref.data) / s_src) + m_ref)


def _require_pan_variance(pan: Raster, what: str):
    if std(pan.data) < STD_FLOOR:
        raise DegenerateInputError(f"{what} needs a panchromatic image with nonzero variance")


def fuse_brovey(inp: FusionInputs) -> Raster:
    """``F = M * (P / mean(P))`` band by band."""
    p = inp.pan.data[0]
    mp = mean(p)
    if mp == 0.0:
        raise DegenerateInputError("Brovey fusion is undefined when mean(pan) == 0")
    gain = p / mp
    return inp.ms.with_data(inp.ms.data * gain)


def fuse_ihs(inp: FusionInputs, match: bool = True) -> Raster:
    """Intensity substitution for 3-band imagery.

    Swapping I for the (matched) pan and inverting the transform is the same as
    adding ``P' - I`` to every band; hue and saturation are left untouched.
    """
    if inp.ms.bands != 3:
        raise UnsupportedBandCountError(f"IHS fusion needs exactly 3 bands, got {inp.ms.bands}")
    intensity = to_intensity(inp.ms)
    if match:
        _require_pan_variance(inp.pan, "IHS fusion with moment matching")
        pan = match_moments(inp.pan, intensity)
    else:
        pan = inp.pan
    delta = pan.data[0] - intensity.data[0]
    return inp.ms.with_data(inp.ms.data + delta)


def fuse_pca(inp: FusionInputs, mode: str = "substitute", match: bool = True) -> Raster:
    """PCA fusion.

    ``substitute`` replaces the first score plane with the pan (moment-matched
    to that plane unless ``match`` is off). ``paper_literal`` adds the pan to
    every score plane and returns the scores without inverting.
    """
    if mode not in PCA_MODES:
        raise ParameterError(f"pca mode must be one of {PCA_MODES}, got {mode!r}")
    model = fit_pca(inp.ms)
    scores = pca_forward(inp.ms, model)
    if mode == "paper_literal":
        return scores.with_data(scores.data + inp.pan.data[0])

    _require_pan_variance(inp.pan, "PCA substitution")
    first = scores.band(0)
    sub = match_moments(inp.pan, first) if match else inp.pan
    planes = scores.data.copy()
    planes[0] = sub.data[0]
    fused = pca_inverse(scores.with_data(planes), model)
    return inp.ms.with_data(fused.data)


def default_levels(ratio: int) -> int:
    return max(1, math.ceil(math.log2(ratio)))


def fuse_wavelet(inp: FusionInputs, levels: int | None = None, match: bool = True) -> Raster:
    """Keep each MS band's approximation subband; take every detail subband from the pan."""
    if levels is None:
        levels = default_levels(inp.ratio)
    pan = match_moments(inp.pan, to_intensity(inp.ms)) if match else inp.pan
    pan_details = dwt2(pan, levels).details
    out = np.empty_like(inp.ms.data)
    for b in range(inp.ms.bands):
        pyr = dwt2(inp.ms.band(b), levels)
        fused = pyr.with_details(pan_details)
        out[b] = idwt2(fused).data[0]
    return inp.ms.with_data(out)


def fuse(inp: FusionInputs, method: FusionMethod | str) -> Raster:
    if isinstance(method, str):
        method = FusionMethod(method)
    o = method.options
    if method.tag == "brovey":
        return fuse_brovey(inp)
    if method.tag == "ihs":
        return fuse_ihs(inp, match=o["match"])
    if method.tag == "pca":
        return fuse_pca(inp, mode=o["mode"], match=o["match"])
    return fuse_wavelet(inp, levels=o["levels"], match=o["match"])


def fuse_cascade(inp: FusionInputs, stages: Sequence[FusionMethod | str]) -> Raster:
    """Run ``stages`` left to right, each sharpening the previous stage's output."""
    if not stages:
        raise ParameterError("a cascade needs at least one stage")
    ms = inp.ms
    for i, stage in enumerate(stages):
        method = FusionMethod(stage) if isinstance(stage, str) else stage
        try:
            ms = fuse(FusionInputs(ms, inp.pan, inp.ratio), method)
        except PanfuseError as exc:
            try:
                tagged = type(exc)(f"cascade stage {i} ({method.tag}): {exc}")
            except TypeError:
                tagged = PanfuseError(f"cascade stage {i} ({method.tag}): {exc}")
            tagged.stage_index = i
            raise tagged from exc
    return ms


def cascade_label(stages: Sequence[FusionMethod | str]) -> str:
    tags = [s if isinstance(s, str) else s.tag for s in stages]
    return "cascade:" + "+".join(tags)
