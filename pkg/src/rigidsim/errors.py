"""Exception types shared across the package."""


class RigidSimError(Exception):
    """Base class for all errors raised by rigidsim."""


class ValidationError(RigidSimError):
    """An input violates a documented invariant."""


class ParseError(RigidSimError):
    """A scenario file could not be parsed."""


class DegenerateFramework(RigidSimError):
    """All agent positions coincide, so the rigidity matrix vanishes."""


class CollocatedAgents(RigidSimError):
    """Two adjacent agents are numerically collocated and the edge bearing is undefined."""

    def __init__(self, edge_index: int, pair: tuple[int, int], separation: float):
        self.edge_index = edge_index
        self.pair = pair
        self.separation = separation
        super().__init__(
            f"edge {edge_index} {pair}: agent separation {separation:.3e} "
            "is below the collocation threshold"
        )


class NonPositiveEigenvalue(RigidSimError):
    """The error-system matrix is not positive definite; the finite-time bound is undefined."""
