"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Bad user-supplied parameters (CLI exit code 2)."""


class BudgetExceeded(ValidationError):
    """An enumeration would exceed its configured budget."""


class NestingError(ValidationError):
    """The pair of classical codes does not satisfy C_x^perp <= C_z."""


class InternalCheckError(AssertionError):
    """An identity that must hold by construction was violated (CLI exit code 3)."""
