"""Exception hierarchy for thomason-lab."""

from typing import Any, Optional


class LabError(Exception):
    """Base class for every error raised by thomason-lab."""


class GraphError(LabError):
    """Malformed graph input or missing embedding witness."""


class BudgetExceededError(LabError):
    """An oracle or walk budget was exhausted."""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class WiringSearchError(LabError):
    """No gadget wiring satisfies the family invariants."""


class SnapshotError(LabError):
    """Wiring snapshot missing, unreadable or failing its checksum."""


class SelectionError(LabError):
    """Distinguished cycles or edges could not be selected unambiguously."""


class ClassificationError(LabError):
    """A gadget traversal or bounce behaviour matches no known class."""


class InvariantError(LabError):
    """A structural invariant of the word layer was breached."""


class ParameterError(LabError, ValueError):
    """An operation was called with an out-of-range parameter."""


class NumericError(LabError):
    """A numerical routine failed to converge."""
