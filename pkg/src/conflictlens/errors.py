"""
Exception hierarchy for conflictlens.

Policy:
- Every library failure is a ConflictLensError subclass
- Input problems are also ValueErrors so plain validation code can catch them
- The CLI maps every ConflictLensError to exit code 3
"""

from __future__ import annotations

from typing import Iterable, Optional, Tuple


class ConflictLensError(Exception):
    """Base class for all conflictlens failures."""


class InputError(ConflictLensError, ValueError):
    """Raised when a literal, identifier or file content is malformed."""


class ParseError(InputError):
    """Raised when scenario text cannot be tokenized or parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class DeclarationError(ParseError):
    """Raised when a scenario declaration is duplicated, missing or undeclared."""


class UnsupportedFragmentError(ConflictLensError):
    """Raised when a formula operator is outside the fragment an operation accepts."""


class PreconditionError(ConflictLensError):
    """Raised when an operation is called outside its documented precondition."""


class HorizonOverflowError(ConflictLensError):
    """Raised when a formula looks further ahead than the encoding horizon."""

    def __init__(self, depth: int, horizon: int, label: str = "formula"):
        self.depth = depth
        self.horizon = horizon
        super().__init__(f"{label} has temporal depth {depth} > horizon {horizon}")


class CapacityError(ConflictLensError):
    """Raised when an enumeration would exceed its configured bound."""

    def __init__(self, what: str, count: int, bound: int, option: str):
        self.count = count
        self.bound = bound
        super().__init__(
            f"{what}: {count} exceeds bound {bound} (raise it with {option})"
        )


class ModelIntegrityError(ConflictLensError):
    """Raised when transition rules give a reachable state no successor."""

    def __init__(self, message: str, state: Optional[Tuple[Tuple[str, str], ...]] = None):
        self.state = state
        super().__init__(message)


class EvidenceIncompatibleError(ConflictLensError):
    """Raised when an evidence group contradicts the world dynamics."""

    def __init__(self, core: Iterable[str]):
        self.core = tuple(core)
        super().__init__(
            "evidence incompatible with world dynamics: " + ", ".join(self.core)
        )


class TotalityError(ConflictLensError):
    """Raised when a strategy has no decision for a reachable history class."""

    def __init__(self, owner: str, step: int, history: tuple):
        self.owner = owner
        self.step = step
        self.history = history
        super().__init__(f"strategy of {owner} is undefined at step {step} for {history}")


class ConfigurationError(ConflictLensError):
    """Raised when the run configuration or scenario lacks required data."""
