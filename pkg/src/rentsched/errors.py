"""Exception types shared across the solver library."""


class SchedulingError(Exception):
    """Base class for all library errors."""


class NotAPermutation(SchedulingError, ValueError):
    """A sequence is missing job ids or repeats them."""


class InvalidBlockSets(SchedulingError, ValueError):
    """Block constructor sets overlap, contain r-jobs, or fall outside the window."""


class Infeasible(SchedulingError):
    """No sequence satisfies the requested budget."""


class TooLarge(SchedulingError):
    """Instance exceeds a solver's size cap."""


class ParseError(SchedulingError, ValueError):
    """Instance document is malformed."""


class BadSource(SchedulingError, ValueError):
    """Reduction source numbers violate the construction's preconditions."""
