"""Shared exception taxonomy.

Every error raised by the library derives from TropLimError so callers can
catch library failures in one clause.  ResourceCap subclasses mark inputs
that exceed documented size limits (ambient rank, tower depth); the CLI maps
them to a dedicated exit code.
"""


class TropLimError(Exception):
    """Base class for all library errors."""


class ZeroVector(TropLimError):
    """A nonzero lattice vector was required."""


class DimensionMismatch(TropLimError):
    """Operands live in different ambient ranks."""


class NotStronglyConvex(TropLimError):
    """The generated cone contains a line."""


class IndexOutOfRange(TropLimError, IndexError):
    """A level or cell index is outside the stored range."""


class ResourceCap(TropLimError):
    """Input exceeds a documented resource limit."""


class RankCap(ResourceCap):
    """Ambient rank above the exact-arithmetic cap (4)."""


class DepthCap(ResourceCap):
    """Tower extended beyond the configured depth limit."""


class EmptyChain(TropLimError):
    """A cone chain must contain at least one entry."""


class UndecidableSign(TropLimError):
    """Interval enclosure straddles zero on a nonzero combination.

    The exact coefficient vector is nonzero, so the true sign is determined
    by the declared irrational symbols; the caller must refine the symbol
    enclosures and retry.
    """

    def __init__(self, message, coefficients=None, interval=None):
        super().__init__(message)
        self.coefficients = coefficients
        self.interval = interval


class OriginNotOnGerm(TropLimError):
    """The polynomial has a constant term, so the origin is not on its zero set."""


class NoBranchFound(TropLimError):
    """Numeric sampling found no branch approaching the origin."""


class BoundViolation(TropLimError):
    """A computed count exceeds the asserted combinatorial bound."""


class IncoherentIncidence(TropLimError):
    """Stratum incidence data does not define a complex."""


class MissingProvenance(TropLimError):
    """The complex does not carry the incidence data needed for this operation."""


class NoAffineStructure(TropLimError):
    """The complex has no integral-affine structure."""


class NotSimplicial(TropLimError):
    """Vertex images do not span a single target cell."""


class PointOutsideTarget(TropLimError):
    """The query point does not lie on the target complex."""


class NotCompatible(TropLimError):
    """The lattice map does not send every source cone into a target cone."""


class UnknownStratum(TropLimError):
    """No stratum with the requested identifier."""


class IncompleteTower(TropLimError):
    """The finite tower cannot certify the query (divisibility never reached)."""


class ParseError(TropLimError):
    """Input file violates the documented schema."""


class ValidationError(TropLimError):
    """Structured input parsed but failed semantic validation."""
