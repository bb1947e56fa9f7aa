from .evaluate import band_ssim, evaluate
from .pixel import psnr, rmse
from .quality import MetricConfig, MetricReport, default_weights, normalize, quality_index
from .spatial import edge_preservation, esr, mtf50, resolution_enhancement_factor, ssim
from .spectral import sam, sid, spectral_content_preservation

__all__ = [
    "MetricConfig",
    "MetricReport",
    "band_ssim",
    "default_weights",
    "edge_preservation",
    "esr",
    "evaluate",
    "mtf50",
    "normalize",
    "psnr",
    "quality_index",
    "resolution_enhancement_factor",
    "rmse",
    "sam",
    "sid",
    "spectral_content_preservation",
    "ssim",
]
