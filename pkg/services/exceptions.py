"""
Exception hierarchy shared by all services.
"""

from typing import List, Optional


class PcsError(Exception):
    """Base class for every error raised by the toolkit."""


class ModelValidationError(PcsError):
    """A channel system description is inconsistent."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("invalid model: " + "; ".join(self.violations))


class ConfigurationMismatchError(PcsError):
    """Two configurations (or a configuration and a model) disagree on arity."""


class UnsupportedSemanticsError(PcsError):
    """An operation was requested under a semantics it does not support."""


class HeightMismatchError(PcsError):
    pass


class MalformedWordError(PcsError):
    """A letter lies outside the declared alphabet or label stratum."""


class ImproperCodeError(PcsError):
    """A word is not a proper ordinal code at the requested level."""


class DepthOverflowError(PcsError):
    """A term or tree does not fit the requested encoding level."""


class NotALimitError(PcsError, ArithmeticError):
    pass


class NotASuccessorError(PcsError, ArithmeticError):
    pass


class EpsilonZeroError(PcsError, ArithmeticError):
    """The operation is only defined below epsilon-zero."""


class BudgetExhaustedError(PcsError):
    """A Hardy evaluation exceeded its step or value ceiling."""

    def __init__(self, message: str, steps: int = 0, value: int = 0):
        self.steps = steps
        self.value = value
        super().__init__(message)


class SearchBudgetExceededError(PcsError):
    """A search visited more configurations than allowed."""


class RobustnessViolationError(PcsError):
    """Embedded codes produced a decreasing Hardy value."""


class ReplayError(PcsError):
    """A stored run contains an illegal step."""

    def __init__(self, index: int, reason: str):
        self.index = index
        self.reason = reason
        super().__init__(f"step {index}: {reason}")


class RunNormalizationError(PcsError):
    pass


class ParseError(PcsError, ValueError):
    """Text input could not be parsed."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class TranslationError(PcsError):
    """A lossy channel system cannot be translated."""
