"""Exception types shared across the package."""


class LocNashError(Exception):
    """Base class for all locnash errors."""


class ParseError(LocNashError):
    """Malformed literal, descriptor or config input."""


class DegenerateGenerators(LocNashError):
    """Generator list is linearly dependent over the reals at the working tolerance."""


class NotASublattice(LocNashError):
    """First group is not contained in the second."""


class NonIntegerTransition(LocNashError):
    """Transition matrix between bases fails the integer rounding gate."""


class SingularMatrix(LocNashError):
    """Matrix is singular or too ill-conditioned to invert reliably."""


class InsufficientSamples(LocNashError):
    """Too many sample points were rejected (poles / capped values)."""


class NotRealStructure(LocNashError):
    """Operation requires a real structure (real matrix, conjugation-closed lattices)."""


class RankOutOfRange(LocNashError):
    """Period-group rank outside the range valid for the ambient dimension."""


class InternalInconsistency(LocNashError):
    """Computed invariant contradicts the expected closed form; signals a bug."""
