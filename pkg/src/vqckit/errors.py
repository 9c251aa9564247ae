"""Exception hierarchy shared across the package."""


class VqckitError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(VqckitError):
    """Invalid configuration or flag combination."""


class DataError(VqckitError):
    """Malformed or unusable input data (CSV files, UMAT files)."""


class NumericalError(VqckitError):
    """A numerical routine failed or produced an inconsistent result."""
