"""Exception types shared across the package."""

from __future__ import annotations


class ValidationError(ValueError):
    """Raised when a document violates the instance schema.

    Carries the complete list of violations, not just the first one.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class UnknownIdError(KeyError):
    """An operation referenced a teacher or school id that does not exist."""


class InfeasibleTransferError(ValueError):
    """A transfer violates acceptability, surplus, or deficit constraints."""


class CapExceededError(RuntimeError):
    """An exhaustive operation was asked to run beyond its configured cap."""

    def __init__(self, message, *, limit=None, actual=None):
        super().__init__(message)
        self.limit = limit
        self.actual = actual


class SolverDefectError(AssertionError):
    """An internal invariant that is guaranteed by theory failed to hold.

    This always indicates a bug (or a broken custom game), never bad user
    input, so it surfaces loudly with diagnostics attached.
    """

    def __init__(self, message, **details):
        self.details = details
        if details:
            message = f"{message} [{details!r}]"
        super().__init__(message)
