"""Exception hierarchy for the oqwalk package."""


class OqwalkError(Exception):
    """Base class for all oqwalk-specific errors."""


class NonConvergenceError(OqwalkError):
    """Polynomial root iteration failed to converge (ill-conditioned input)."""


class ParseError(OqwalkError, ValueError):
    """Malformed angle string."""


class OutOfRangeError(OqwalkError, ValueError):
    """Requested value lies outside its mathematical domain."""


class ResidueTooLargeError(OqwalkError):
    """An imaginary residue exceeded its bound; signals a generator bug."""


class DegenerateEigenvalueError(OqwalkError):
    """The tracked eigenvalue is a multiple root; derivative formulas do not apply."""


class NotReducibleError(OqwalkError):
    """Parameters admit no closed 2x2 block reduction."""


class WrongCaseError(OqwalkError):
    """A closed-form moment routine was called outside its parameter case."""


class NegativeRadicandError(OqwalkError):
    """A variance-slope radicand came out negative; signals an implementation bug."""
