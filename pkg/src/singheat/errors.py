"""Exception types shared across the package."""

__all__ = [
    "ConvergenceError",
    "GridMismatchError",
    "ParameterError",
    "SeriesRangeError",
    "TruncationError",
]


class ParameterError(ValueError):
    """A parameter lies outside its admissible range."""


class GridMismatchError(ValueError):
    """Operands live on different grids or have incompatible shapes."""


class TruncationError(RuntimeError):
    """The spatial box is too small for the requested evolution time.

    Raised when the sampled heat kernel loses more mass past the box
    boundary than the configured tail tolerance allows.
    """


class ConvergenceError(RuntimeError):
    """An iteration failed to meet its tolerance within the step budget,
    or a structural inequality the scheme guarantees was violated beyond
    rounding slack."""


class SeriesRangeError(ValueError):
    """Argument outside the convergent or representable regime of a series."""
