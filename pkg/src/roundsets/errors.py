"""Exception types shared across the package."""


class RoundsetsError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(RoundsetsError):
    """Array dimensions are inconsistent or a value is not numeric."""


class PartitionError(RoundsetsError):
    """Norm groups do not partition the coefficient indices."""


class NormError(RoundsetsError):
    """A norm other than 1, 2 or inf was requested."""


class RadiusError(RoundsetsError):
    """A group radius lies outside its admissible interval."""


class DimensionError(RoundsetsError):
    """The ambient dimension is unsupported for this operation."""


class ParseError(RoundsetsError):
    """A JSON or CSV document does not match the expected schema."""


class AffineInfeasible(RoundsetsError):
    """The equality system A beta = b admits no solution."""


class SamplingExhausted(RoundsetsError):
    """Rejection sampling accepted too small a fraction of draws."""


class UnsupportedOperation(RoundsetsError):
    """The requested combination leaves the representable class."""
