"""Exception types shared across the package."""


class NonUnitSeries(ValueError):
    """Inversion of a q-series whose constant term is zero."""


class NoSolution(ValueError):
    """A q-series does not lie in the requested form space."""


class InsufficientOrder(ValueError):
    """A q-series is too short for the requested operation."""


class NotConvergent(ArithmeticError):
    """Truncated series evaluation cannot reach the target tolerance."""


class DegenerateCurve(ValueError):
    """The discriminant vanishes; the curve is singular."""


class BranchAmbiguity(ArithmeticError):
    """No cube-root branch (nor the quadrature fallback) passed the
    period round-trip residual test."""


class InternalConsistencyError(RuntimeError):
    """An operation that is guaranteed to succeed failed; indicates a bug."""
