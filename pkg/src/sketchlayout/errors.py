"""Exception hierarchy shared by all stages."""


class SketchLayoutError(Exception):
    """Base class for every error raised by this package."""


class InvalidImageError(SketchLayoutError):
    """Raised for empty, zero-dimension or otherwise unusable raster input."""


class NotChainableError(SketchLayoutError):
    """Raised when traced polylines cannot be assembled into one chain.

    Signals a branching or disconnected sketch, which the chaining step
    does not support.
    """


class DegenerateGraphError(SketchLayoutError):
    """Raised when the degree-filtered core of the graph is empty."""


class NumericFailureError(SketchLayoutError):
    """Raised when the layout produces non-finite coordinates."""


class InputFormatError(SketchLayoutError):
    """Raised for malformed graph files, JSON payloads or CLI inputs."""
