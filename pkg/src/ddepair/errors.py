"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: validation 2, accuracy 3, domain 4.
"""


class DdeError(Exception):
    """Base class for every error raised by ddepair."""


class ValidationError(DdeError, ValueError):
    """Bad parameters or arguments."""


class DomainError(DdeError, ValueError):
    """Input lies outside the region where a formula or representation applies."""


class RepresentationError(DomainError):
    """A q* representation was asked for outside its domain; ``hint`` names the right one."""

    def __init__(self, message, hint=None):
        super().__init__(message)
        self.hint = hint


class HorizonError(DomainError):
    """A piecewise solution does not extend far enough."""

    def __init__(self, message, required_horizon=None):
        super().__init__(message)
        self.required_horizon = required_horizon


class NormalizationError(DomainError):
    """Gamma(-beta) normalization is singular (beta a non-negative integer)."""


class GammaPoleError(DomainError):
    def __init__(self, pole):
        super().__init__(f"Gamma has a pole at z = {pole}")
        self.pole = pole


class AccuracyError(DdeError, ArithmeticError):
    """Numerical method failed to reach the requested tolerance.

    ``estimate`` and ``error`` carry the best value obtained.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class EinOverflowError(DdeError, OverflowError):
    """Ein(z) overflows double precision (Re z far below zero)."""


class CoefficientOverflowError(DdeError, OverflowError):
    def __init__(self, message, last_valid_step):
        super().__init__(message)
        self.last_valid_step = last_valid_step
