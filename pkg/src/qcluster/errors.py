"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Malformed or out-of-range argument."""


class InvalidErrorRate(InvalidInput):
    """Oracle error probability outside [0, 0.5)."""


class SelfQuery(InvalidInput):
    """An element was queried against itself."""


class IncompleteGraph(InvalidInput):
    """An operation needing every pair of the vertex set found a missing weight."""


class InstanceTooLarge(RuntimeError):
    """An exact solver was handed more vertices than its configured cap."""


class ResidualTooLarge(InstanceTooLarge):
    """The residual graph left for the final ML step exceeds the brute-force cap."""
