"""
Ordinal Terms
Sums of omega-powers below epsilon-zero, plus the epsilon-zero atom
"""

import enum
from dataclasses import dataclass
from typing import Tuple


class OrdinalClass(str, enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


@dataclass(frozen=True)
class OrdinalTerm:
    """
    The term w^{e_1} + ... + w^{e_k} for exponents e_i (themselves terms).

    Terms are syntactic: they need not be in Cantor normal form, and the
    empty sum is zero. `epsilon0=True` denotes the epsilon-zero atom and
    carries no exponents.
    """
    exponents: Tuple["OrdinalTerm", ...] = ()
    epsilon0: bool = False

    @property
    def is_zero(self) -> bool:
        return not self.exponents and not self.epsilon0

    def __add__(self, other: "OrdinalTerm") -> "OrdinalTerm":
        if self.epsilon0 or other.epsilon0:
            raise ValueError("epsilon-zero cannot appear inside a sum")
        return OrdinalTerm(self.exponents + other.exponents)

    def __str__(self):
        from utils.term_parser import format_term
        return format_term(self)


ZERO = OrdinalTerm()
ONE = OrdinalTerm((ZERO,))
OMEGA = OrdinalTerm((ONE,))
EPSILON0 = OrdinalTerm(epsilon0=True)


def omega_power(exponent: OrdinalTerm) -> OrdinalTerm:
    return OrdinalTerm((exponent,))


def from_int(n: int) -> OrdinalTerm:
    if n < 0:
        raise ValueError(f"negative ordinal {n}")
    return OrdinalTerm((ZERO,) * n)


def omega_tower(n: int) -> OrdinalTerm:
    """Omega_0 = 1 and Omega_{n+1} = w^{Omega_n}."""
    term = ONE
    for _ in range(n):
        term = omega_power(term)
    return term


@dataclass(frozen=True)
class HardyBudget:
    max_value: int = 1_000_000
    max_steps: int = 10_000_000
