"""
Ordinal Codes
Proper priority words as codes of ordinals below epsilon-zero: decoding,
encoding, predecessor and fundamental-sequence operations on codes, and the
robustness check tying the priority embedding to Hardy computations.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

from models.ordinal_terms import HardyBudget, OrdinalTerm
from models.words import Word, staircase
from services.exceptions import (
    BudgetExhaustedError,
    DepthOverflowError,
    EpsilonZeroError,
    ImproperCodeError,
    NotALimitError,
    NotASuccessorError,
    RobustnessViolationError,
)
from services.ordinals import hardy_eval
from services.priority_order import canonical_factorize, pleq

logger = logging.getLogger(__name__)


def is_proper(x: Word) -> bool:
    """No upward jump of more than one, and a non-empty word ends with its largest letter."""
    if not x:
        return True
    if any(letter < 0 for letter in x) or x[-1] != max(x):
        return False
    return all(b - a <= 1 for a, b in zip(x, x[1:]))


def in_level(x: Word, level: int) -> bool:
    """Membership in the codes of level `level` (empty, or proper and ending with `level`)."""
    return not x or (is_proper(x) and x[-1] == level)


def _require_code(x: Word, level: int) -> None:
    if not in_level(x, level):
        raise ImproperCodeError(f"{x} is not a proper code of level {level}")


@dataclass(frozen=True)
class CodeDecomposition:
    """x = y_d ... y_a followed by the staircase a (a+1) ... d."""
    level: int
    start: int
    blocks: Tuple[Word, ...]  # y_d, y_(d-1), ..., y_a

    def block(self, i: int) -> Word:
        return self.blocks[self.level - i]


def decompose(x: Word, d: int) -> CodeDecomposition:
    _require_code(x, d)
    if not x:
        raise ImproperCodeError("the empty code has no decomposition")
    start = len(x) - 1
    while start > 0 and x[start - 1] == x[start] - 1:
        start -= 1
    a = x[start]
    rest = x[:start]
    blocks = []
    for level in range(d, a - 1, -1):
        cut = max((i for i, letter in enumerate(rest) if letter == level), default=-1)
        block, rest = rest[:cut + 1], rest[cut + 1:]
        if not in_level(block, level):
            raise ImproperCodeError(f"block {block} of {x} is not a code of level {level}")
        blocks.append(block)
    if rest:
        raise ImproperCodeError(f"{x} does not decompose at level {d}")
    return CodeDecomposition(d, a, tuple(blocks))


@lru_cache(maxsize=None)
def eta(x: Word) -> OrdinalTerm:
    """Ordinal denoted by a proper code: the sum of w^eta(r) over the residuals r before each top letter."""
    if not is_proper(x):
        raise ImproperCodeError(f"{x} is not proper")
    factorization = canonical_factorize(x)
    return OrdinalTerm(tuple(eta(residual) for residual in factorization.residuals[:-1]))


def encode(alpha: OrdinalTerm, level: int) -> Word:
    """The code of `alpha` at `level`; exponents are encoded one level lower."""
    if alpha.epsilon0:
        raise EpsilonZeroError("epsilon-zero has no code")
    if level < 0:
        if alpha.is_zero:
            return ()
        raise DepthOverflowError(f"{alpha} needs more levels")
    result: Word = ()
    for exponent in alpha.exponents:
        result += encode(exponent, level - 1) + (level,)
    return result


def code_pred(x: Word, d: int) -> Word:
    """Code of the predecessor of a successor code (drop the final letter)."""
    if not x:
        raise NotASuccessorError("zero has no predecessor")
    decomposition = decompose(x, d)
    if decomposition.start != d:
        raise NotASuccessorError(f"{x} codes a limit")
    return x[:-1]


def code_limit_expand(x: Word, n: int, d: int) -> Word:
    """Code of the n-th element of the fundamental sequence of a limit code."""
    if not x:
        raise NotALimitError("zero is not a limit")
    decomposition = decompose(x, d)
    a = decomposition.start
    if a == d:
        raise NotALimitError(f"{x} codes a successor")
    head: Word = ()
    for level in range(d, a, -1):
        head += decomposition.block(level)
    return head + (decomposition.block(a) + (a + 1,)) * n + staircase(a + 2, d)


@dataclass(frozen=True)
class RobustnessCheck:
    embeds: bool
    checked: bool
    lower: Optional[int] = None
    upper: Optional[int] = None


def robust_leq(x: Word, x2: Word, n: int, n2: int, budget: Optional[HardyBudget] = None) -> RobustnessCheck:
    """
    When x embeds into x2 and 1 <= n <= n2, the Hardy values must not decrease.
    The inequality fails at n = 0 (H^1(0) = 1 > H^w(0) = 0), so pairs with a
    zero counter are reported unchecked, as are pairs that exhaust the budget.

    Raises:
        RobustnessViolationError: embedded codes with a smaller Hardy value
    """
    for word in (x, x2):
        if not is_proper(word):
            raise ImproperCodeError(f"{word} is not proper")
    if n > n2:
        raise ValueError("counter precondition n <= n2 violated")
    if not pleq(x, x2):
        return RobustnessCheck(False, True)
    if n == 0:
        return RobustnessCheck(True, False)
    try:
        lower = hardy_eval(eta(x), n, budget)
        upper = hardy_eval(eta(x2), n2, budget)
    except BudgetExhaustedError:
        logger.info(f"robustness of {x} <= {x2} left unchecked: budget exhausted")
        return RobustnessCheck(True, False)
    if lower > upper:
        raise RobustnessViolationError(f"H({x})({n}) = {lower} > H({x2})({n2}) = {upper}")
    return RobustnessCheck(True, True, lower, upper)
