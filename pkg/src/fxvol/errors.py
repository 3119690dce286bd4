"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
NumericalError -> 3.
"""


class FxvolError(Exception):
    """Base class for all package errors."""


class ConfigError(FxvolError):
    """Bad command-line or config-file input."""


class DataError(FxvolError):
    """Invalid, malformed, or insufficient input data."""


class ParameterError(DataError):
    """Model parameters violate their constraints."""


class NumericalError(FxvolError):
    """Numerical failure: non-finite intermediates or singular systems."""


class ConvergenceWarning(UserWarning):
    """Optimizer stopped without meeting its convergence criteria."""
