from .haar import WaveletPyramid, dwt2, idwt2, max_levels
from .methods import (
    TAGS,
    FusionMethod,
    cascade_label,
    default_levels,
    fuse,
    fuse_brovey,
    fuse_cascade,
    fuse_ihs,
    fuse_pca,
    fuse_wavelet,
    match_moments,
)
from .pca import PcaModel, fit_pca, jacobi_eigh, pca_forward, pca_inverse

__all__ = [
    "TAGS",
    "FusionMethod",
    "PcaModel",
    "WaveletPyramid",
    "cascade_label",
    "default_levels",
    "dwt2",
    "fit_pca",
    "fuse",
    "fuse_brovey",
    "fuse_cascade",
    "fuse_ihs",
    "fuse_pca",
    "fuse_wavelet",
    "idwt2",
    "jacobi_eigh",
    "match_moments",
    "max_levels",
    "pca_forward",
    "pca_inverse",
]
