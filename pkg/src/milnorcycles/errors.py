"""Exception taxonomy for the library.

Every failure mode is a named exception; nothing degrades silently.  The
computational routines either return an exact answer or raise one of these.
"""


class MilnorCyclesError(Exception):
    """Base class for all library errors."""


class ParseError(MilnorCyclesError):
    """Malformed polynomial / symbol / field-tag input."""


class DivisionByNonUnit(MilnorCyclesError):
    """Division in the local ring k[t]_(t) by an element with num(0) = 0."""


class NonUnit(MilnorCyclesError):
    """An element required to be invertible is not.

    Raised by truncated-series inversion (constant term zero) and by
    finite-algebra inversion (multiplication matrix singular over k(t), or
    the solution has a denominator vanishing at t = 0).
    """


class GhostUndefined(MilnorCyclesError):
    """Ghost coordinates requested over a field of characteristic p <= m."""


class DenominatorNotUnit(MilnorCyclesError):
    """Clearing denominators of a minimal polynomial needs a non-unit of A.

    Also raised when an intermediate algebra is too degenerate for a unique
    monic minimal polynomial to exist.
    """


class ReducibleExtension(MilnorCyclesError):
    """The extension polynomial factors over the base field."""


class NonUnitCoordinate(MilnorCyclesError):
    """A point coordinate is not a unit of its algebra."""


class NonUnitEntry(MilnorCyclesError):
    """A symbol entry is not a unit."""


class NonUnitParameter(MilnorCyclesError):
    """A witness parameter is not a unit of A."""


class SteinbergDegenerate(MilnorCyclesError):
    """Steinberg witness with 1 - a not a unit."""


class UnhandledFaceShape(MilnorCyclesError):
    """A substituted face polynomial is neither a unit, nor a (y-1)-power
    times a monic factor with unit constant term.

    Signals a cycle or witness outside the supported families; see the
    degenerate intermediate states discussed in the package docs.
    """


class PairDiverged(MilnorCyclesError):
    """Lock-step reduction of an equivalent pair produced different degree
    vectors; internal-consistency failure."""


class NotRelative(MilnorCyclesError):
    """trace input has no entry congruent to 1 mod t^r."""
