"""Exception classes raised across the package."""


class IREEError(Exception):
    """Base class for all errors raised by this package."""


class InvalidCovarianceError(IREEError, ValueError):
    """Covariance matrix is not symmetric positive definite."""


class InvalidMixtureError(IREEError, ValueError):
    """Mixture weights or components violate the mixture invariants."""


class EmptyFieldError(IREEError, ValueError):
    """A field has no positive mass where some is required."""


class GridMismatchError(IREEError, ValueError):
    """Two fields are defined on different grids."""


class DegenerateScenarioError(IREEError, ArithmeticError):
    """A metric would divide by a zero total (power, capacity, traffic, cost)."""


class DegenerateMixtureError(IREEError, ValueError):
    """Both mixture totals are zero, so the pooled distribution is undefined."""


class ConfigError(IREEError, ValueError):
    """Scenario or sweep configuration could not be parsed or validated."""
