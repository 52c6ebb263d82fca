"""Exception hierarchy.

Every error raised on bad input derives from :class:`FrameError`, which is a
``ValueError`` so callers that only care about "bad value" can catch that.
"""


class FrameError(ValueError):
    """Base class for all domain errors raised by this package."""


class NotHermitian(FrameError):
    pass


class NotEffect(FrameError):
    pass


class NotProjector(FrameError):
    pass


class NotDensity(FrameError):
    """A candidate density operator fails positivity or unit trace.

    Carries the diagnostics so callers (the CLI in particular) can report them.
    """

    def __init__(self, message, *, trace=None, min_eigenvalue=None, matrix=None):
        super().__init__(message)
        self.trace = trace
        self.min_eigenvalue = min_eigenvalue
        self.matrix = matrix


class DimensionMismatch(FrameError):
    pass


class Incomplete(FrameError):
    """Effects do not resolve the identity."""

    def __init__(self, message, *, residue=None):
        super().__init__(message)
        self.residue = residue


class OutsideCone(FrameError):
    pass


class NotUnitVector(FrameError):
    pass


class IncompleteVectorSet(FrameError):
    pass


class NotRotation(FrameError):
    pass


class IndexOutOfRange(FrameError):
    pass


class InvalidBlochVector(FrameError):
    pass


class RealityViolated(FrameError):
    pass


class UnknownName(FrameError):
    pass


class BadParameter(FrameError):
    pass


class MissingSamples(FrameError):
    pass


class FormatError(FrameError):
    """Malformed file contents; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
