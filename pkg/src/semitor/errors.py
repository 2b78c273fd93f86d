"""Exception hierarchy. The CLI maps each class to a fixed exit code."""


class SemitorError(Exception):
    exit_code = 3


class ValidationError(SemitorError, ValueError):
    """Bad input: malformed datum, unknown label, non-dominant weight, ..."""

    exit_code = 1


class UsageError(ValidationError):
    """Operands that cannot be combined (mismatched orders, missing caps)."""


class BudgetError(SemitorError):
    """A computation needed more work than its configured budget allowed."""

    exit_code = 2

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data


class InconsistencyError(SemitorError):
    """An internal invariant was breached. Always a bug or a false claim."""

    exit_code = 3

    def __init__(self, message, data=None):
        super().__init__(message)
        self.data = data
