"""Exception types shared across the library."""


class MultivalError(Exception):
    """Base class for all library errors."""


class ZeroInput(MultivalError):
    """An operation received zero where a nonzero value is required."""


class FieldMismatch(MultivalError):
    """Operands belong to different base fields."""


class SameValuation(MultivalError):
    """Two valuations were required to be distinct."""


class InconsistentTargets(MultivalError):
    """A valuation appears twice in one approximation request."""


class ZeroEntry(MultivalError):
    """A tuple entry is zero where nonzero entries are required."""


class NonDecreasingDiscrepancy(MultivalError):
    """Internal consistency failure in the scrambling loop."""


class UnsupportedRing(MultivalError):
    """The operation is not defined for this ring spec variant."""


class UnsupportedArity(MultivalError):
    """Too many generators for the glued-ring decision procedure."""


class AllZero(MultivalError):
    """All generators are zero."""


class NotInClosure(MultivalError):
    """Element has a negative valuation, so it is not integral."""


class ConstructionFailed(MultivalError):
    """A self-certifying construction failed its own re-verification."""


class Undecided(MultivalError):
    """The spec pair falls outside the implemented decision catalogue."""


class SpecMismatch(MultivalError):
    """Parts of a decomposition do not match the target topology."""


class SentenceSyntaxError(MultivalError):
    """Syntax error in the local-sentence language, with position info."""

    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
