"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument is outside its documented domain."""


class InsufficientDataError(ValueError):
    """Not enough data points to perform a fit."""


class AliasingError(ValueError):
    """Sample rate too low for the declared signal band."""
