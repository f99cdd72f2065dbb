"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class GraphInputError(ValueError):
    """Malformed graph input (bad vertex, self-loop, size overflow)."""


class Graph6ParseError(GraphInputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.message = message
        self.offset = offset


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""


class GapError(NumericError):
    """Spectral gap between the tracked block and the rest collapsed."""

    def __init__(self, message: str, gap: float, alpha: float | None = None):
        super().__init__(message)
        self.gap = gap
        self.alpha = alpha


class NormalFormError(NumericError):
    """Leading block of an invariant subspace basis is numerically singular."""


class HypothesisError(ValueError):
    """Precondition of a lemma check does not hold for the given input."""


class SkipCheck(Exception):
    """A check does not apply to this input; reported as a skip, not a failure."""
