"""
Exception hierarchy for cliffordkt
"""

from typing import Optional


class CliffordKTError(Exception):
    """Base class for all errors raised by cliffordkt."""


class ParseError(CliffordKTError, ValueError):
    """Malformed target expression or gate word."""

    def __init__(self, message: str, offset: Optional[int] = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class DimensionError(CliffordKTError, ValueError):
    """Qubit counts of two operands do not match, or exceed the configured maximum."""


class InfeasibleError(CliffordKTError):
    """The target lies outside the span of the candidate states."""


class SolverError(CliffordKTError):
    """The LP backend failed or hit its iteration limit."""


class BudgetExceededError(CliffordKTError):
    """A job would exceed the memory budget or the T-gate budget."""


class SymmetryError(CliffordKTError):
    """A symmetry generator does not fix the target state."""

    def __init__(self, message: str, pauli_index: Optional[int] = None):
        self.pauli_index = pauli_index
        super().__init__(message)


class FormatError(CliffordKTError):
    """A state-set file could not be decoded."""


class MissingTableEntryError(CliffordKTError, KeyError):
    """A robustness value needed for a comparison is not available."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
