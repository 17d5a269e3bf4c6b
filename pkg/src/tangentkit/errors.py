"""Exception types shared across the package."""


class DomainError(ValueError):
    """A primitive was evaluated outside its domain of definition."""


class FiberMismatchError(ValueError):
    """Fiberwise operation applied to values over different base points."""


class ChartConsistencyError(ValueError):
    """A computed second-order jet violates the expected pure-vertical shape."""
