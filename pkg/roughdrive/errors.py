"""
Exception hierarchy and CLI exit codes
"""
from enum import IntEnum


class ExitCode(IntEnum):
    """Stable process exit codes"""
    PASS = 0
    EXPERIMENT_FAILURE = 1
    CONFIG_ERROR = 2


class RoughDriveError(Exception):
    """Root of every error raised by the package"""


class DomainError(RoughDriveError, ValueError):
    """An argument lies outside its admissible range"""


class ContractError(RoughDriveError, ValueError):
    """The caller broke a documented precondition"""


class DegenerateInputError(ContractError):
    """An estimator received identically-zero increments"""


class NumericError(RoughDriveError, ArithmeticError):
    """A numerical procedure failed to converge or produced non-finite values"""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ConfigError(RoughDriveError):
    """Configuration could not be parsed or validated"""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
