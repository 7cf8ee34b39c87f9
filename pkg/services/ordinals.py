"""
Ordinal Arithmetic
Cantor normal forms, fundamental sequences, the Hardy hierarchy, the
ordinal embedding and natural (Hessenberg) operations.
"""

import logging
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from typing import List, Optional, Tuple, Union

from config.settings import settings
from models.ordinal_terms import (
    ONE,
    HardyBudget,
    OrdinalClass,
    OrdinalTerm,
    from_int,
    omega_power,
    omega_tower,
)
from services.exceptions import BudgetExhaustedError, EpsilonZeroError, NotALimitError

logger = logging.getLogger(__name__)


def classify(a: OrdinalTerm) -> OrdinalClass:
    if a.epsilon0:
        return OrdinalClass.LIMIT
    if not a.exponents:
        return OrdinalClass.ZERO
    return OrdinalClass.SUCCESSOR if a.exponents[-1].is_zero else OrdinalClass.LIMIT


def _no_epsilon0(*terms: OrdinalTerm) -> None:
    for term in terms:
        if term.epsilon0:
            raise EpsilonZeroError("operation undefined at epsilon-zero")


def _cmp(a: OrdinalTerm, b: OrdinalTerm) -> int:
    # both arguments in Cantor normal form
    for x, y in zip(a.exponents, b.exponents):
        c = _cmp(x, y)
        if c:
            return c
    return (len(a.exponents) > len(b.exponents)) - (len(a.exponents) < len(b.exponents))


_cnf_key = cmp_to_key(_cmp)


@lru_cache(maxsize=None)
def to_cnf(a: OrdinalTerm) -> OrdinalTerm:
    """Normalize exponents, then absorb every summand followed by a larger one."""
    if a.epsilon0:
        return a
    result: List[OrdinalTerm] = []
    for exponent in a.exponents:
        if exponent.epsilon0:
            raise EpsilonZeroError("epsilon-zero cannot appear as an exponent")
        exponent = to_cnf(exponent)
        while result and _cmp(result[-1], exponent) < 0:
            result.pop()
        result.append(exponent)
    return OrdinalTerm(tuple(result))


def ord_cmp(a: OrdinalTerm, b: OrdinalTerm) -> int:
    if a.epsilon0 or b.epsilon0:
        return int(a.epsilon0) - int(b.epsilon0)
    return _cmp(to_cnf(a), to_cnf(b))


def ord_lt(a: OrdinalTerm, b: OrdinalTerm) -> bool:
    return ord_cmp(a, b) < 0


def ord_eq(a: OrdinalTerm, b: OrdinalTerm) -> bool:
    return ord_cmp(a, b) == 0


def is_finite(a: OrdinalTerm) -> bool:
    return not a.epsilon0 and all(e.is_zero for e in to_cnf(a).exponents)


def to_int(a: OrdinalTerm) -> int:
    if not is_finite(a):
        raise ValueError(f"{a} is not finite")
    return len(to_cnf(a).exponents)


def fund_seq(limit: OrdinalTerm, n: int) -> OrdinalTerm:
    """
    The n-th element of the fundamental sequence, computed on the term:
    (g + w^(b+1))_n = g + w^b * n, (g + w^l)_n = g + w^(l_n), e0_n = Omega_n.
    """
    if n < 0:
        raise ValueError("index must be non-negative")
    if limit.epsilon0:
        return omega_tower(n)
    if classify(limit) != OrdinalClass.LIMIT:
        raise NotALimitError(f"{limit} is not a limit")
    head, last = limit.exponents[:-1], limit.exponents[-1]
    if classify(last) == OrdinalClass.SUCCESSOR:
        return OrdinalTerm(head + (OrdinalTerm(last.exponents[:-1]),) * n)
    return OrdinalTerm(head + (fund_seq(last, n),))


def hardy_step(a: OrdinalTerm, n: int) -> Tuple[OrdinalTerm, int]:
    """(a+1, n) -> (a, n+1) and (l, n) -> (l_n, n)."""
    kind = classify(a)
    if kind == OrdinalClass.ZERO:
        raise ValueError("no Hardy step from zero")
    if kind == OrdinalClass.SUCCESSOR:
        return OrdinalTerm(a.exponents[:-1]), n + 1
    return fund_seq(a, n), n


def default_budget() -> HardyBudget:
    return HardyBudget(max_value=settings.pcs_budget_value, max_steps=settings.pcs_budget_steps)


def hardy_eval(a: OrdinalTerm, n: int, budget: Optional[HardyBudget] = None) -> int:
    """
    H^a(n), iterating Hardy steps until the ordinal reaches zero.

    Raises:
        BudgetExhaustedError: once the step count or the counter passes the budget
    """
    budget = budget or default_budget()
    term, value, steps = a, n, 0
    while not term.is_zero:
        trailing = 0
        if not term.epsilon0:
            while trailing < len(term.exponents) and term.exponents[-1 - trailing].is_zero:
                trailing += 1
        if trailing:
            term = OrdinalTerm(term.exponents[:-trailing])
            value += trailing
            steps += trailing
        else:
            term, value = hardy_step(term, value)
            steps += 1
        if steps > budget.max_steps or value > budget.max_value:
            logger.warning(f"Hardy evaluation of {a} at {n} exhausted its budget ({steps} steps, value {value})")
            raise BudgetExhaustedError(f"budget exhausted after {steps} steps (value {value})", steps, value)
    return value


def fgh_eval(k: Union[OrdinalTerm, int], n: int, budget: Optional[HardyBudget] = None) -> int:
    """Fast-growing F_k(n) = H^(w^k)(n), for any index below epsilon-zero."""
    index = from_int(k) if isinstance(k, int) else k
    _no_epsilon0(index)
    return hardy_eval(omega_power(index), n, budget)


@lru_cache(maxsize=None)
def leqo(a: OrdinalTerm, b: OrdinalTerm) -> bool:
    """Ordinal embedding: summands of a map injectively and in order onto larger-or-embedded summands of b."""
    _no_epsilon0(a, b)
    j = 0
    for exponent in a.exponents:
        while j < len(b.exponents) and not leqo(exponent, b.exponents[j]):
            j += 1
        if j == len(b.exponents):
            return False
        j += 1
    return True


def natural_sum(a: OrdinalTerm, b: OrdinalTerm) -> OrdinalTerm:
    _no_epsilon0(a, b)
    merged = sorted(to_cnf(a).exponents + to_cnf(b).exponents, key=_cnf_key, reverse=True)
    return OrdinalTerm(tuple(merged))


def natural_product(a: OrdinalTerm, b: OrdinalTerm) -> OrdinalTerm:
    _no_epsilon0(a, b)
    exponents = [natural_sum(x, y) for x in to_cnf(a).exponents for y in to_cnf(b).exponents]
    return OrdinalTerm(tuple(sorted(exponents, key=_cnf_key, reverse=True)))


def natural_power(a: OrdinalTerm, m: int) -> OrdinalTerm:
    result = ONE
    for _ in range(m):
        result = natural_product(result, a)
    return result


def order_type_sum(o_a: OrdinalTerm, o_b: OrdinalTerm) -> OrdinalTerm:
    """Maximal order type of a disjoint sum."""
    return natural_sum(o_a, o_b)


def order_type_product(o_a: OrdinalTerm, o_b: OrdinalTerm) -> OrdinalTerm:
    """Maximal order type of a cartesian product."""
    return natural_product(o_a, o_b)


def order_type_star(o_a: OrdinalTerm, finite: bool) -> OrdinalTerm:
    """Maximal order type of finite words under subword embedding."""
    if finite:
        size = to_int(o_a)
        if size == 0:
            return ONE
        return to_cnf(omega_power(omega_power(from_int(size - 1))))
    return to_cnf(omega_power(omega_power(o_a)))


@dataclass(frozen=True)
class MaxOrderTypeBound:
    sequence: Tuple[OrdinalTerm, ...]  # o_{-1}, o_0, ..., o_d
    bound: OrdinalTerm
    closed_form: OrdinalTerm


def maxot_bounds(d: int, m: int, q: int) -> MaxOrderTypeBound:
    """
    Upper bounds on the maximal order type of the configuration space of a
    system with m channels over {0..d} and q states.
    """
    if d < 0 or m < 1 or q < 1:
        raise ValueError("maxot bounds need d >= 0, m >= 1 and q >= 1")
    sequence = [ONE]
    for k in range(d + 1):
        previous = sequence[-1]
        o_k = to_cnf(omega_power(omega_power(previous)))
        o_k = natural_product(natural_product(o_k, previous), previous)
        if k > 0:
            o_k = natural_product(o_k, from_int(k))
        sequence.append(o_k)
    bound = natural_product(natural_power(sequence[-1], m), from_int(q))
    closed_form = natural_product(natural_power(to_cnf(omega_tower(2 * d + 1)), m), from_int(q))
    return MaxOrderTypeBound(tuple(sequence), bound, closed_form)

