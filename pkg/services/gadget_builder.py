"""
Gadget Builder
Incremental construction of channel systems. Paths between two states are
given as regular languages over channel actions and embedded through their
minimal DFA, one intermediate state per DFA state.
"""

import enum
import logging
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple, Union

from automata.fa.dfa import DFA
from automata.fa.nfa import NFA

from models.channel_system import Op, Pcs, Rule
from services.languages import (
    compile_nfa,
    concat,
    dead_states,
    epsilon,
    letter_symbol,
    letters,
    parse_letter_regex,
    star,
    substitute,
    word,
)
from services.pcs_semantics import validate

logger = logging.getLogger(__name__)

Action = Tuple[str, str, int]  # (channel, "!" or "?", letter)


class MetaMode(str, enum.Enum):
    """How a letter language is turned into channel actions"""
    READ_WRITE_BACK = "read_write_back"
    READ_ONLY = "read_only"
    WRITE_ONLY = "write_only"


# Action languages

def act(channel: str, op: str, letter: int) -> NFA:
    return word([(channel, op, letter)])


def reads(channel: str, values: Iterable[int]) -> NFA:
    return word((channel, "?", a) for a in values)


def writes(channel: str, values: Iterable[int]) -> NFA:
    return word((channel, "!", a) for a in values)


def per_letter(language: NFA, actions: Callable[[int], Sequence[Action]]) -> NFA:
    """Replace every letter by a fixed sequence of actions."""
    return substitute(language, actions)


def read_back(channel: str, language: NFA) -> NFA:
    """Read a word of the language and write it back behind the channel contents."""
    return per_letter(language, lambda a: [(channel, "?", a), (channel, "!", a)])


def read_back_word(channel: str, values: Iterable[int]) -> NFA:
    return read_back(channel, letter_word(values))


def read_lang(channel: str, language: NFA) -> NFA:
    return per_letter(language, lambda a: [(channel, "?", a)])


def write_lang(channel: str, language: NFA) -> NFA:
    return per_letter(language, lambda a: [(channel, "!", a)])


# Letter languages

def letter_word(values: Iterable[int]) -> NFA:
    return word(letter_symbol(a) for a in values)


def proper_codes(level: int) -> NFA:
    """Proper codes of a level: the empty word at level -1, (codes one level lower, then the level)*."""
    language = epsilon()
    for a in range(level + 1):
        language = star(concat(language, letter_word([a])))
    return language


def code_blocks(high: int, low: int) -> NFA:
    """Concatenation of codes of levels high, high-1, ..., low."""
    return concat(*[proper_codes(level) for level in range(high, low - 1, -1)])


def any_letters(top: int) -> NFA:
    return star(letters(range(top + 1)))


class PcsBuilder:
    """
    Accumulates states and rules of a channel system under construction.

    Args:
        level: letters range over 0..level
        channels: channel names
        prefix: prefix of generated state names
    """

    def __init__(self, level: int, channels: Sequence[str], prefix: str = "s"):
        self.level = level
        self.channels = list(channels)
        self.prefix = prefix
        self.states: List[str] = []
        self._known: Set[str] = set()
        self.rules: List[Rule] = []
        self._rule_keys: Set[Tuple[str, str, str, int, str]] = set()
        self._counter = 0
        self.blocks: Dict[str, List[str]] = {}
        self._current_block: Optional[str] = None

    def state(self, name: str) -> str:
        if name not in self._known:
            self._known.add(name)
            self.states.append(name)
            if self._current_block is not None:
                self.blocks[self._current_block].append(name)
        return name

    def fresh(self, hint: Optional[str] = None) -> str:
        while True:
            name = f"{hint or self.prefix}{self._counter}"
            self._counter += 1
            if name not in self._known:
                return self.state(name)

    def begin_block(self, name: str) -> None:
        """States created until the next call are recorded under `name`."""
        self.blocks.setdefault(name, [])
        self._current_block = name

    def rule(self, source: str, channel: str, op: str, letter: int, target: str) -> None:
        key = (source, channel, op, letter, target)
        if key in self._rule_keys:
            return
        self._rule_keys.add(key)
        self.state(source)
        self.state(target)
        self.rules.append(Rule(**{"from": source, "channel": channel, "op": Op(op), "letter": letter, "to": target}))

    def path(self, source: str, target: str, language: Union[NFA, DFA]) -> None:
        """
        Add states and rules so that the runs from `source` to `target`
        through the new states spell exactly the actions of `language`.
        """
        dfa = language if isinstance(language, DFA) else compile_nfa(language)
        dead = dead_states(dfa)
        initial = dfa.initial_state
        if initial in dead:
            raise ValueError("path language is empty")
        if initial in dfa.final_states and source != target:
            raise ValueError(f"path {source} -> {target} would need an empty run")
        self.state(source)
        self.state(target)

        # breadth-first over sorted symbols, so equal languages give equal rule lists
        edges: List[Tuple[Hashable, Action, Hashable]] = []
        order = [initial]
        seen = {initial}
        for s in order:
            row = dfa.transitions.get(s, {})
            for sym in sorted(row, key=repr):
                t = row[sym]
                if t in dead:
                    continue
                edges.append((s, sym, t))
                if t not in seen:
                    seen.add(t)
                    order.append(t)
        has_outgoing = {s for s, _, _ in edges}
        has_incoming = any(t == initial for _, _, t in edges)
        # returning to an accepting initial state of a loop is returning to source
        initial_is_source = not has_incoming or (source == target and initial in dfa.final_states)
        mapping: Dict[Hashable, str] = {}

        def location(s: Hashable) -> str:
            if s not in mapping:
                if s == initial and initial_is_source:
                    mapping[s] = source
                else:
                    mapping[s] = self.fresh()
            return mapping[s]

        for s, (channel, op, letter), t in edges:
            origins = [location(s)]
            if s == initial and origins[0] != source:
                origins.append(source)
            destinations = []
            if t in has_outgoing:
                destinations.append(location(t))
            if t in dfa.final_states:
                destinations.append(target)
            for origin in origins:
                for destination in destinations:
                    self.rule(origin, channel, op, letter, destination)

    def expand_meta(
        self,
        source: str,
        target: str,
        channel: str,
        language: Union[str, NFA],
        mode: MetaMode = MetaMode.READ_WRITE_BACK,
    ) -> None:
        """Embed a letter language (regular expression text or letter NFA) as channel actions."""
        letter_nfa = parse_letter_regex(language, self.level) if isinstance(language, str) else language
        mode = MetaMode(mode)
        if mode == MetaMode.READ_WRITE_BACK:
            actions = read_back(channel, letter_nfa)
        elif mode == MetaMode.READ_ONLY:
            actions = read_lang(channel, letter_nfa)
        else:
            actions = write_lang(channel, letter_nfa)
        self.path(source, target, actions)

    def build(self, initial: Optional[str] = None) -> Pcs:
        model = Pcs(level=self.level, channels=self.channels, states=self.states, initial=initial, rules=self.rules)
        validate(model)
        logger.debug(f"built model with {len(model.states)} states and {len(model.rules)} rules")
        return model
