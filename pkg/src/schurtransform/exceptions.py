"""Exception types shared across the package."""


class SchurTransformError(Exception):
    """Base class for all package-specific errors."""


class DataError(SchurTransformError, ValueError):
    """Malformed or inconsistent input data.

    Messages name the offending file and row where applicable so the
    failure can be located without re-running under a debugger.
    """


class ResourceBudgetError(SchurTransformError, RuntimeError):
    """A requested computation would exceed the configured memory budget.

    Raised before any large allocation happens, with the estimate and the
    budget attached so callers can print a required-vs-available report.
    """

    def __init__(self, message, *, required_bytes=None, budget_bytes=None):
        super().__init__(message)
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes


class InvariantViolationError(SchurTransformError, RuntimeError):
    """An exact internal identity failed to hold.

    This signals an implementation bug or a corrupted projector cache,
    never bad user input.
    """
