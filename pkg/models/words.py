"""
Priority words and their labeled generalization.

A priority word over the alphabet {0, ..., d} is a plain tuple of ints;
a labeled word is a tuple of LabeledLetter pairs.
"""

import enum
from dataclasses import dataclass
from typing import Any, NamedTuple, Tuple

Word = Tuple[int, ...]

EMPTY: Word = ()


class LabeledLetter(NamedTuple):
    priority: int
    label: Any


LabeledWord = Tuple[LabeledLetter, ...]


class ClosureKind(str, enum.Enum):
    """Which closure of a word an automaton recognizes"""
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class CanonicalFactorization:
    """x = x_0 h x_1 h ... h x_k with every letter of x_i below h."""
    height: int
    residuals: Tuple[Word, ...]

    @property
    def occurrences(self) -> int:
        return len(self.residuals) - 1


def height(word: Word) -> int:
    """Largest letter of the word, -1 for the empty word."""
    return max(word) if word else -1


def staircase(a: int, b: int) -> Word:
    """The word a (a+1) ... b; empty when a > b."""
    return tuple(range(a, b + 1))
