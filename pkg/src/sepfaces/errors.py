"""Exception types raised across the package."""


class MalformedOperatorError(ValueError):
    """Operator is not Hermitian (or not a state) within tolerance."""


class DomainError(ValueError):
    """A parameter lies outside the domain where a construction is defined."""


class DegeneratePencilError(RuntimeError):
    """The subspace carries a positive-dimensional family of product vectors.

    Raised by the exhaustive locator when elimination collapses (an
    identically vanishing resultant, or too few constraints to cut the
    product variety down to points).
    """


class DegenerateExtensionError(RuntimeError):
    """Boundary extension is impossible: the maximal step is zero or the
    extended operator vanishes."""


class NoFeasibleDropError(RuntimeError):
    """None of the drop-one linear systems admits a feasible solution."""


class NotGeneralPositionError(ValueError):
    """A predicate requiring general position received a degenerate family."""
