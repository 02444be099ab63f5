"""Exception types shared across the package."""


class SkewSpecError(Exception):
    """Base class for all skewspec errors."""


class DegenerateNormalization(SkewSpecError):
    """The normalization constant r(p, q) is zero; the scaled matrix is undefined."""


class NotSkewSymmetric(SkewSpecError):
    """A matrix handed to the skew eigensolver failed the skew-symmetry check."""


class MalformedWalk(SkewSpecError):
    """A closed-walk vertex sequence repeats a vertex on consecutive steps."""


class EnumerationBoundExceeded(SkewSpecError):
    """An exhaustive oracle was asked to enumerate beyond its hard size bound."""


class InvalidConfig(SkewSpecError):
    """An ensemble configuration violates its invariants."""
