"""
Hardy Gadgets
Channel systems performing Hardy steps on configurations (p, s(a)$, 0^n$, $)
over the channels o, c and t, and the weak Hardy computers assembled from
them. The marker $ is the letter d+1.
"""

import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List

from models.channel_system import Config, Pcs
from models.words import Word, staircase
from services.gadget_builder import (
    PcsBuilder,
    any_letters,
    code_blocks,
    letter_word,
    per_letter,
    proper_codes,
    read_back,
    read_back_word,
    read_lang,
    writes,
)
from services.languages import concat, plus, star, word

logger = logging.getLogger(__name__)

O, C, T = "o", "c", "t"
HARDY_CHANNELS = (O, C, T)


class Direction(str, enum.Enum):
    FWD = "fwd"
    BWD = "bwd"


@dataclass
class Gadget:
    """A generated system with its designated entry and exit states."""
    model: Pcs
    entry: str
    exit: str
    blocks: Dict[str, List[str]] = field(default_factory=dict)


def hardy_config(state: str, code: Word, n: int, d: int) -> Config:
    """The configuration (state, code$, 0^n$, $)."""
    marker = d + 1
    return Config(state, (tuple(code) + (marker,), (0,) * n + (marker,), (marker,)))


def _check(d: int) -> None:
    if d < 0:
        raise ValueError("level must be non-negative")


def add_s1(b: PcsBuilder, d: int, p: str, r: str) -> None:
    """(a+1, n) -> (a, n+1): drop the final d of the code, then append a 0 to the counter."""
    _check(d)
    marker = d + 1
    q = b.fresh("s1_q")
    b.path(p, q, concat(read_back(O, proper_codes(d)), word([(O, "?", d)]), read_back_word(O, [marker])))
    b.path(q, q, read_back_word(C, [0]))
    b.path(q, r, concat(writes(C, [0]), read_back_word(C, [marker])))


def add_s2(b: PcsBuilder, d: int, p: str, r: str) -> None:
    """(a, n+1) -> (a+1, n)."""
    _check(d)
    marker = d + 1
    b.path(p, r, concat(
        word([(C, "?", 0)]),
        star(read_back_word(C, [0])),
        read_back_word(C, [marker]),
        read_back(O, proper_codes(d)),
        writes(O, [d]),
        read_back_word(O, [marker]),
    ))


def add_s3(b: PcsBuilder, d: int, p: str, r: str) -> None:
    """
    (l, n) -> (l_n, n) for a limit l. One component per level a < d of the
    final staircase; the entry guesses a and the wrong guesses deadlock.
    The repeated block y_a (a+1) is parked on t and copied n times onto o,
    reading t before writing o.
    """
    _check(d)
    marker = d + 1
    for a in range(d):
        q = b.fresh(f"s3_q{a}_")
        b.path(p, q, concat(
            read_back(O, code_blocks(d, a + 1)),
            per_letter(proper_codes(a), lambda x: [(O, "?", x), (T, "!", x)]),
            word([(O, "?", a), (O, "?", a + 1), (T, "!", a + 1)]),
            read_back_word(T, [marker]),
        ))
        b.path(q, q, concat(
            read_back_word(C, [0]),
            per_letter(any_letters(d), lambda x: [(T, "?", x), (T, "!", x), (O, "!", x)]),
            read_back_word(T, [marker]),
        ))
        b.path(q, r, concat(
            read_back_word(C, [marker]),
            read_lang(T, any_letters(d)),
            read_back_word(T, [marker]),
            read_back_word(O, staircase(a + 2, d)),
            read_back_word(O, [marker]),
        ))


def add_s4(b: PcsBuilder, d: int, p: str, r: str) -> None:
    """(l_n, n) -> (l, n) for n >= 1: fold the n copies of y_a (a+1) back into y_a a (a+1)."""
    _check(d)
    marker = d + 1
    for a in range(d):
        q = b.fresh(f"s4_q{a}_")
        b.path(p, q, concat(
            read_back(O, code_blocks(d, a + 1)),
            per_letter(proper_codes(a), lambda x: [(O, "?", x), (T, "!", x)]),
            word([(O, "?", a + 1), (T, "!", a + 1)]),
            read_back_word(T, [marker]),
        ))
        b.path(q, q, concat(
            read_back_word(C, [0]),
            per_letter(any_letters(d), lambda x: [(T, "?", x), (T, "!", x), (O, "?", x)]),
            read_back_word(T, [marker]),
        ))
        b.path(q, r, concat(
            read_back_word(C, [0, marker]),
            per_letter(proper_codes(a), lambda x: [(T, "?", x), (O, "!", x)]),
            word([(T, "?", a + 1), (O, "!", a), (O, "!", a + 1)]),
            read_back_word(T, [marker]),
            read_back_word(O, staircase(a + 2, d)),
            read_back_word(O, [marker]),
        ))


def _single(d: int, add) -> Gadget:
    b = PcsBuilder(d + 1, HARDY_CHANNELS)
    b.state("p")
    b.state("r")
    add(b, d, "p", "r")
    return Gadget(b.build(initial="p"), "p", "r")


def build_s1(d: int) -> Gadget:
    return _single(d, add_s1)


def build_s2(d: int) -> Gadget:
    return _single(d, add_s2)


def build_s3(d: int) -> Gadget:
    return _single(d, add_s3)


def build_s4(d: int) -> Gadget:
    return _single(d, add_s4)


def add_weak_hardy(b: PcsBuilder, d: int, direction: Direction, p_init: str, p_final: str) -> str:
    """
    Hub with the step gadgets of one direction as loops. The entry checks
    (o, c, t) = (code$, 0+$, $); the forward exit requires a zero ordinal,
    the backward exit re-checks the shape. Returns the hub state.
    """
    _check(d)
    direction = Direction(direction)
    marker = d + 1
    hub = b.state(f"{direction.value}_hub")
    b.path(p_init, hub, concat(
        read_back(O, proper_codes(d)),
        read_back_word(O, [marker]),
        read_back(C, plus(letter_word([0]))),
        read_back_word(C, [marker]),
        read_back_word(T, [marker]),
    ))
    if direction == Direction.FWD:
        add_s1(b, d, hub, hub)
        add_s3(b, d, hub, hub)
        b.path(hub, p_final, concat(read_back_word(O, [marker]), read_back_word(T, [marker])))
    else:
        add_s2(b, d, hub, hub)
        add_s4(b, d, hub, hub)
        b.path(hub, p_final, concat(
            read_back(O, proper_codes(d)),
            read_back_word(O, [marker]),
            read_back(C, star(letter_word([0]))),
            read_back_word(C, [marker]),
            read_back_word(T, [marker]),
        ))
    return hub


def build_weak_hardy(d: int, direction: Direction) -> Gadget:
    """Weak Hardy computer over codes of level d, from p_init to p_final."""
    b = PcsBuilder(d + 1, HARDY_CHANNELS)
    b.state("p_init")
    b.state("p_final")
    add_weak_hardy(b, d, direction, "p_init", "p_final")
    gadget = Gadget(b.build(initial="p_init"), "p_init", "p_final")
    logger.info(f"weak Hardy computer d={d} {Direction(direction).value}: {len(gadget.model.states)} states")
    return gadget
