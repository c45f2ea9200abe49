"""Exception types shared across the package."""


class FrameletError(Exception):
    """Base class for all library errors."""


class NotReducible(FrameletError):
    """No unimodular conjugation to a canonical dilation was found."""


class InvalidN0(FrameletError):
    """Filter support half-width is too small to carry a solution."""


class NoConvergence(FrameletError):
    """The filter solver exhausted its starts without reaching tolerance."""


class MismatchedFilter(FrameletError):
    """A filter was paired with a field or matrix it does not belong to."""


class GridTooCoarse(FrameletError):
    """Requested synthesis grid cannot resolve the integer lattice."""


class DegenerateInput(FrameletError):
    """An input with zero norm (or otherwise unusable data) was supplied."""
