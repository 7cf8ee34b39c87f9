"""
Turing Machine Reduction
Builds the three-stage channel system that computes a space budget with a
forward weak Hardy computer, simulates a Turing machine on channel c within
that budget, and checks with a backward weak Hardy computer that no
superseding happened.
"""

import enum
import logging
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from models.ordinal_terms import OrdinalTerm, omega_tower
from models.words import Word
from services.exceptions import DepthOverflowError, TranslationError
from services.gadget_builder import PcsBuilder, letter_word, read_lang, reads, writes
from services.hardy_gadgets import HARDY_CHANNELS, C, Direction, Gadget, O, T, add_weak_hardy
from services.languages import concat, star, union, word
from services.ordinal_codes import encode
from services.ordinals import to_cnf

logger = logging.getLogger(__name__)

K = "k"


class Move(str, enum.Enum):
    LEFT = "L"
    RIGHT = "R"
    STAY = "S"


class TmTransition(BaseModel):
    state: str
    read: int = Field(ge=0)
    next: str
    write: int = Field(ge=0)
    move: Move


class TinyTm(BaseModel):
    """
    Deterministic single-tape machine. Tape symbols are 0..symbols-1 and 0
    is the blank; the halting state has no transitions.
    """
    states: List[str]
    symbols: int = Field(ge=1)
    start: str
    halt: str
    transitions: List[TmTransition] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_table(self) -> "TinyTm":
        known = set(self.states)
        for name in (self.start, self.halt):
            if name not in known:
                raise ValueError(f"unknown state '{name}'")
        seen = set()
        for tr in self.transitions:
            if tr.state not in known or tr.next not in known:
                raise ValueError(f"transition {tr.state} -> {tr.next} uses an unknown state")
            if tr.read >= self.symbols or tr.write >= self.symbols:
                raise ValueError(f"transition from {tr.state} uses a symbol outside 0..{self.symbols - 1}")
            if tr.state == self.halt:
                raise ValueError("the halting state has no transitions")
            if (tr.state, tr.read) in seen:
                raise ValueError(f"two transitions for ({tr.state}, {tr.read})")
            seen.add((tr.state, tr.read))
        return self

    @property
    def size(self) -> int:
        return len(self.states) + len(self.transitions)

    def table(self) -> Dict[Tuple[str, int], TmTransition]:
        return {(tr.state, tr.read): tr for tr in self.transitions}


def tm_halts_within(tm: TinyTm, tape_len: int, steps: int) -> bool:
    """Run on a blank tape of `tape_len` cells; falling off the tape or a missing transition is a failure."""
    table = tm.table()
    tape = [0] * tape_len
    state, head = tm.start, 0
    if tape_len == 0:
        return False
    for _ in range(steps + 1):
        if state == tm.halt:
            return not any(tape)
        tr = table.get((state, tape[head]))
        if tr is None:
            return False
        tape[head] = tr.write
        state = tr.next
        head += {Move.LEFT: -1, Move.RIGHT: 1, Move.STAY: 0}[tr.move]
        if not 0 <= head < tape_len:
            return False
    return False


def code_level(alpha: OrdinalTerm) -> int:
    """Smallest level at which the term has a code."""
    alpha = to_cnf(alpha)
    level = 0
    while True:
        try:
            encode(alpha, level)
            return level
        except DepthOverflowError:
            level += 1


class _MachineBuilder:
    """Head-rotation simulation: one full pass over channel c per machine step."""

    def __init__(self, b: PcsBuilder, tm: TinyTm, marker: int, timed: bool):
        self.b = b
        self.tm = tm
        self.marker = marker
        self.timed = timed
        self.k = tm.symbols

    def top(self, state: str) -> str:
        return self.b.state(f"tm_{state}")

    def buffered(self, state: str, x: int) -> str:
        return self.b.state(f"tm_{state}_buf{x}")

    def copying(self, state: str) -> str:
        return self.b.state(f"tm_{state}_copy")

    def _actions(self, first: List[Tuple[str, str, int]], timed: bool):
        if timed and self.timed:
            return word([(K, "?", 0)] + first)
        return word(first)

    def _marked_step(self, source: str, tr: TmTransition, buffer: Optional[int]) -> None:
        """Rules for reading the marked cell from `source` with `buffer` not yet written back."""
        b, k = self.b, self.k
        timed = buffer is None
        done = self.copying(tr.next)
        before = [] if buffer is None else [(C, "!", buffer)]
        read_head = [(C, "?", k + tr.read)]
        if tr.move == Move.STAY:
            b.path(source, done, self._actions(read_head + before + [(C, "!", k + tr.write)], timed))
        elif tr.move == Move.LEFT:
            if buffer is None:
                return
            b.path(source, done, self._actions(read_head + [(C, "!", k + buffer), (C, "!", tr.write)], timed))
        else:
            for z in range(k):
                b.path(source, done, self._actions(
                    read_head + before + [(C, "!", tr.write), (C, "?", z), (C, "!", k + z)], timed
                ))

    def build(self, entry: str, halted: str) -> None:
        b, k, marker = self.b, self.k, self.marker
        table = self.tm.table()
        b.path(entry, self.copying(self.tm.start), word([(C, "?", 0), (C, "!", k)]))
        for state in self.tm.states:
            for x in range(k):
                b.path(self.copying(state), self.copying(state), word([(C, "?", x), (C, "!", x)]))
            b.path(self.copying(state), self.top(state), word([(C, "?", marker), (C, "!", marker)]))
            if state == self.tm.halt:
                continue
            for x in range(k):
                b.path(self.top(state), self.buffered(state, x), self._actions([(C, "?", x)], True))
                for y in range(k):
                    b.path(self.buffered(state, x), self.buffered(state, y), word([(C, "?", y), (C, "!", x)]))
            for s in range(k):
                tr = table.get((state, s))
                if tr is None:
                    continue
                self._marked_step(self.top(state), tr, None)
                for x in range(k):
                    self._marked_step(self.buffered(state, x), tr, x)
        clear = union(word([(C, "?", 0), (C, "!", 0)]), word([(C, "?", k), (C, "!", 0)]))
        b.path(self.top(self.tm.halt), halted, concat(star(clear), word([(C, "?", marker), (C, "!", marker)])))


def build_reduction(
    tm: TinyTm,
    alpha_override: Optional[OrdinalTerm] = None,
    n_override: Optional[int] = None,
    with_time_budget: bool = False,
) -> Gadget:
    """
    Three-stage system from q0 to q_h. By default the seed is the tower of
    height d = max(|M| + 1, 2k - 1) and the counter |M|; the overrides make
    the construction small enough to explore.
    """
    k = tm.symbols
    n = tm.size if n_override is None else n_override
    if n < 1:
        raise TranslationError("the seed counter must be at least 1")
    if alpha_override is None:
        d = max(tm.size + 1, 2 * k - 1)
        alpha = omega_tower(d)
    else:
        alpha = to_cnf(alpha_override)
        if alpha.epsilon0:
            raise TranslationError("the seed ordinal must lie below epsilon-zero")
        d = max(code_level(alpha), 2 * k - 1)
    code: Word = encode(to_cnf(alpha), d)
    marker = d + 1
    channels = list(HARDY_CHANNELS) + ([K] if with_time_budget else [])
    b = PcsBuilder(marker, channels)

    b.begin_block("seed")
    q0 = b.state("q0")
    fwd_init = b.state("fwd_init")
    b.path(q0, fwd_init, concat(
        writes(O, code + (marker,)),
        writes(C, (0,) * n + (marker,)),
        writes(T, [marker]),
    ))

    b.begin_block("forward")
    p0 = b.state("p0")
    add_weak_hardy(b, d, Direction.FWD, fwd_init, p0)

    b.begin_block("machine")
    entry = p0
    if with_time_budget:
        entry = b.state("tm_entry")
        b.path(p0, entry, concat(
            star(word([(C, "?", 0), (C, "!", 0), (K, "!", 0)])),
            word([(C, "?", marker), (C, "!", marker), (K, "!", marker)]),
        ))
    p_h = b.state("p_h")
    _MachineBuilder(b, tm, marker, with_time_budget).build(entry, p_h)

    b.begin_block("backward")
    bwd_final = b.state("bwd_final")
    add_weak_hardy(b, d, Direction.BWD, p_h, bwd_final)

    b.begin_block("drain")
    q_h = b.state("q_h")
    drain = [reads(O, code + (marker,)), reads(C, (0,) * n + (marker,)), reads(T, [marker])]
    if with_time_budget:
        drain += [read_lang(K, star(letter_word([0]))), reads(K, [marker])]
    b.path(bwd_final, q_h, concat(*drain))
    if with_time_budget:
        idle = b.fresh("q_h_idle")
        b.rule(q_h, K, "!", marker, idle)
        b.rule(idle, K, "?", marker, q_h)

    gadget = Gadget(b.build(initial=q0), q0, q_h, b.blocks)
    logger.info(
        f"reduction for a {len(tm.states)}-state machine: level {marker}, "
        f"{len(gadget.model.states)} states, {len(gadget.model.rules)} rules"
    )
    return gadget
