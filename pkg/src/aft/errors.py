"""Exception hierarchy.

Errors fall into three families that the CLI maps onto exit codes:
bad input (1), a broken theorem guarantee (2) and exceeded size bounds (3).
"""

from __future__ import annotations


class AftError(Exception):
    """Base class. ``stage`` is filled in by the certification pipeline."""

    exit_code = 1
    stage: str | None = None


class DomainError(AftError, ValueError):
    """An argument lies outside the domain of an operation."""


class InstanceError(AftError, ValueError):
    """A malformed instance document or network definition."""


class SwitchingViolationError(AftError):
    """No switch witness exists for some (P, Q, e)."""


class PreconditionError(AftError):
    """A checker received an infeasible flow or a non-covering cut."""


class CutInconsistencyError(AftError):
    """A cut duration was placed on an element that no path reaches."""


class FalsificationError(AftError):
    """A structural guarantee that must hold on valid inputs failed."""

    exit_code = 2


class StructuralInconsistencyError(FalsificationError):
    """The minimal switch witness is mixed."""


class TDIViolationError(FalsificationError):
    """No integral optimum was found within the search bounds."""


class ScaleError(AftError):
    """A configured size bound was exceeded."""

    exit_code = 3


class GenerationError(ScaleError):
    """A random generator hit its size bound before finishing."""
