"""Exception hierarchy shared across the package."""


class QbathError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(QbathError, ValueError):
    """A parameter value is out of range or inconsistent with the model family."""


class DataError(QbathError, ValueError):
    """Malformed numerical data: non-finite entries, shape mismatches."""


class SchemaError(QbathError, ValueError):
    """A configuration document violates the documented JSON schema."""


class NumericalError(QbathError, RuntimeError):
    """A numerical procedure failed or lost too much accuracy to continue."""


class SingularGeneratorError(NumericalError):
    """|A|^2 - |C|^2 fell below the floor; generator coefficients are undefined there."""


class PhysicalityError(NumericalError):
    """A computed quantity violated a physicality bound (covariance or purity form)."""


class AccuracyError(NumericalError):
    """Adaptive refinement stopped before reaching the requested tolerance."""
