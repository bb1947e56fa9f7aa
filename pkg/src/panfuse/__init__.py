"""Pan-sharpening of multispectral rasters with a panchromatic band, and
spectral/spatial quality evaluation on synthetic ground truth."""

from .errors import (
    DegenerateInputError,
    FormatError,
    InsufficientDataError,
    NumericError,
    PanfuseError,
    ParameterError,
    RasterError,
    UnsupportedBandCountError,
    UnsupportedFormatError,
)
from .kernels import BACKEND
from .raster import FusionInputs, Raster, make_raster, to_intensity

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DegenerateInputError",
    "FormatError",
    "FusionInputs",
    "InsufficientDataError",
    "NumericError",
    "PanfuseError",
    "ParameterError",
    "Raster",
    "RasterError",
    "UnsupportedBandCountError",
    "UnsupportedFormatError",
    "make_raster",
    "to_intensity",
]
