"""Exception types shared across the package."""

from __future__ import annotations


class ContrexError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(ContrexError):
    """Schema definition or schema/value mismatch problems."""


class TreeFormatError(ContrexError):
    """Malformed or inconsistent tree documents."""


class ConstraintSyntaxError(ContrexError):
    """Constraint text rejected by the parser.

    Carries the 0-based character position of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class TypeMismatchError(ContrexError):
    """Constraint text parsed but mixes incompatible feature kinds."""


class UnknownNameError(ContrexError):
    """Reference to an instance, feature, category or constraint that
    does not exist."""


class BudgetExceededError(ContrexError):
    """Branch-and-bound gave up after exhausting its node budget."""


class SessionError(ContrexError):
    """Invalid session operation (duplicate instance, unknown retract, ...)."""
