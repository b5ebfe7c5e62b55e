"""Exception types raised by the library."""


class FormatError(ValueError):
    """File does not conform to the expected on-disk format."""


class UnsupportedLayout(FormatError):
    """Array file uses a layout this library refuses (e.g. column-major)."""


class InvalidData(ValueError):
    """Array payload violates invariants (NaN/Inf, bad shape, bad dtype)."""


class InvalidAnnotation(ValueError):
    """Bounding box is degenerate or out of bounds."""


class InvalidTarget(ValueError):
    """Requested resampling target is smaller than the source grid."""


class InsufficientSamples(ValueError):
    """Fewer samples than mixture components."""


class DegenerateTrimap(ValueError):
    """Trimap has no foreground or no background pixels to segment."""


class InvalidThreshold(ValueError):
    """Intensity threshold outside the valid [0, 255] range."""


class DimMismatch(ValueError):
    """Two grids that must share dimensions do not."""


class EmptyInput(ValueError):
    """An operation that needs at least one element got none."""
