"""Exception hierarchy shared by every panfuse module."""


class PanfuseError(Exception):
    """Base class for all panfuse errors."""


class RasterError(PanfuseError, ValueError):
    """Raised when a raster cannot be constructed from the given values."""


class ParameterError(PanfuseError, ValueError):
    """An argument is outside its documented domain."""


class DegenerateInputError(PanfuseError, ValueError):
    """The data carries no usable signal (zero variance, zero mean, ...)."""


class UnsupportedBandCountError(PanfuseError, ValueError):
    pass


class InsufficientDataError(PanfuseError, ValueError):
    pass


class NumericError(PanfuseError, ArithmeticError):
    pass


class UnsupportedFormatError(PanfuseError, ValueError):
    pass


class FormatError(PanfuseError, ValueError):
    """A container file is malformed.

    ``offset`` is the byte position at which the problem was detected.
    """

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
