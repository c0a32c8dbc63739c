"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Input violates a structural requirement (shape, symmetry, layout)."""


class PhysicalityError(ValueError):
    """Parameters or covariance matrix describe no physical Gaussian state."""


class NumericalError(RuntimeError):
    """A numerical routine left its domain of validity."""


class SingularMetricError(NumericalError):
    """Bures metric evaluated along a pure direction (nu <= 1 + tol)."""


class StabilityError(ValueError):
    """Drift matrix is not strictly stable; no unique steady state exists."""


class StepSizeError(ValueError):
    """Finite-difference step too small for working precision."""


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""
