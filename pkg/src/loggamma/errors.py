"""Exceptions raised by the log-gamma polymer library."""

from __future__ import annotations

from .constants import EXIT_NUMERIC, EXIT_USAGE


class PolymerError(Exception):
    """Base class for every error the library raises on purpose."""

    exit_code = EXIT_NUMERIC


class UsageError(PolymerError):
    """Raised when a precondition on the inputs is violated."""

    exit_code = EXIT_USAGE


class DomainError(UsageError, ValueError):
    """Raised when a special function is called outside (0, inf)."""


class NumericError(PolymerError):
    """Raised when a bracket cannot be established or a solver does not converge."""

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, residual: float = float("nan"), iterations: int = 0) -> None:
        super().__init__(f"{message} (residual={residual:.3g}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class ConsistencyError(NumericError):
    """Raised when two independent evaluations of one quantity disagree."""
