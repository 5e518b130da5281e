"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A physical parameter or argument is outside its admissible range."""


class RegimeError(InvalidParameterError):
    """An operation was requested outside its parameter regime."""


class GridError(ValueError):
    """A grid is too coarse or too small for the requested operation."""


class BracketError(RuntimeError):
    """A root bracket could not be established or does not change sign."""


class NonConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap without meeting tolerance."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
