"""
Exception hierarchy for shell_averages.
Every error raised on purpose by the library derives from ShellAveragesError,
so the launcher can turn it into a usage error.
"""


class ShellAveragesError(Exception):
    """Base class for library errors."""
    pass


class InvalidQuantumNumberError(ShellAveragesError, ValueError):
    """Raised for malformed (j, m) pairs, disallowed k/lambda values or bad spins."""
    pass


class CapacityError(ShellAveragesError, ValueError):
    """Raised when a configured cap (factorials, expansion l, matrix size) is exceeded."""
    pass


class DivisionByZeroError(ShellAveragesError, ZeroDivisionError):
    pass


class NotRationalError(ShellAveragesError, ValueError):
    """Raised when a quadratic sum that must be rational carries a square root."""
    pass


class BasisMismatchError(ShellAveragesError, ValueError):
    """Raised when energy forms from different parameter bases are combined."""
    pass


class ConsistencyError(ShellAveragesError):
    """Raised when two exact routes to the same quantity disagree."""
    pass


class ConfigError(ShellAveragesError, ValueError):
    """Raised for unreadable configuration files and unknown or mistyped keys."""
    pass
