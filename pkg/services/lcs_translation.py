"""
Lossy Channel Translations
Encodings of lossy channel systems (plain, weak, and with second-order
send/get operations) into priority channel systems, the reliable channel
simulation under strict superseding, and the source semantics used as an
oracle.
"""

import enum
import logging
from typing import List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.channel_system import Config, Pcs
from models.words import Word
from services.exceptions import TranslationError
from services.gadget_builder import PcsBuilder, reads, writes
from services.languages import concat, star, union, word

logger = logging.getLogger(__name__)


class LcsOp(str, enum.Enum):
    WRITE = "!"
    READ = "?"
    SEND = "send"
    GET = "get"


class Flavor(str, enum.Enum):
    PLAIN = "plain"
    WEAK = "weak"
    DLCS = "dlcs"


class LcsRule(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    from_state: str = Field(alias="from")
    channel: str
    op: LcsOp
    message: Optional[str] = None
    to_state: str = Field(alias="to")


class LcsModel(BaseModel):
    """
    A channel system over named messages. For weak systems the message
    list is ordered by increasing priority. `second_order` names the channel
    that holds whole channel contents for send/get.
    """
    lossy: bool = True
    messages: List[str]
    channels: List[str]
    states: List[str]
    initial: Optional[str] = None
    second_order: Optional[str] = None
    rules: List[LcsRule] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_rules(self) -> "LcsModel":
        states, channels, messages = set(self.states), set(self.channels), set(self.messages)
        if self.second_order is not None and self.second_order in channels:
            raise ValueError(f"second-order channel '{self.second_order}' clashes with a channel")
        for rule in self.rules:
            if rule.from_state not in states or rule.to_state not in states:
                raise ValueError(f"rule {rule.from_state} -> {rule.to_state} uses an unknown state")
            if rule.channel not in channels:
                raise ValueError(f"unknown channel '{rule.channel}'")
            if rule.op in (LcsOp.WRITE, LcsOp.READ):
                if rule.message not in messages:
                    raise ValueError(f"unknown message '{rule.message}'")
            elif self.second_order is None:
                raise ValueError(f"'{rule.op.value}' needs a second-order channel")
        return self

    def message_index(self, name: str) -> int:
        return self.messages.index(name)


# Message encodings

def _bits(p: int) -> int:
    return max(1, (p - 1).bit_length())


def _level(l: LcsModel, flavor: Flavor) -> int:
    if flavor == Flavor.PLAIN:
        return 2
    if flavor == Flavor.WEAK:
        return 1
    return len(l.messages) + 1


def encode_message(l: LcsModel, flavor: Flavor, message: str) -> Word:
    """plain: fixed-width binary then 2; weak: 0^i then 1; second-order: i then the separator p."""
    i = l.message_index(message)
    flavor = Flavor(flavor)
    if flavor == Flavor.PLAIN:
        width = _bits(len(l.messages))
        return tuple(int(bit) for bit in format(i, f"0{width}b")) + (2,)
    if flavor == Flavor.WEAK:
        return (0,) * i + (1,)
    return (i, len(l.messages))


def encode_contents(l: LcsModel, flavor: Flavor, contents: Tuple[str, ...]) -> Word:
    return tuple(letter for message in contents for letter in encode_message(l, flavor, message))


LcsConfig = Tuple[str, Tuple[Tuple[str, ...], ...], Tuple[Tuple[str, ...], ...]]


def encode_lcs_config(l: LcsModel, flavor: Flavor, config: LcsConfig) -> Config:
    """Source configuration (state, channel contents, second-order contents) as a translated configuration."""
    state, contents, stored = config
    words = [encode_contents(l, flavor, c) for c in contents]
    if Flavor(flavor) == Flavor.DLCS:
        close = len(l.messages) + 1
        words.append(tuple(letter for w in stored for letter in encode_contents(l, flavor, w) + (close,)))
    return Config(state, tuple(words))


def translate_lcs(l: LcsModel, flavor: Flavor) -> Pcs:
    """Each rule becomes a path between the same two states over its encoded message."""
    flavor = Flavor(flavor)
    if not l.lossy:
        raise TranslationError("translations start from lossy systems; use build_strict_reliable_sim")
    has_second_order = any(rule.op in (LcsOp.SEND, LcsOp.GET) for rule in l.rules)
    if has_second_order and flavor != Flavor.DLCS:
        raise TranslationError(f"send/get need the {Flavor.DLCS.value} flavor")
    level = _level(l, flavor)
    separator = {Flavor.PLAIN: 2, Flavor.WEAK: 1, Flavor.DLCS: len(l.messages)}[flavor]
    close = len(l.messages) + 1
    stored = l.second_order or "c0"
    channels = list(l.channels) + ([stored] if flavor == Flavor.DLCS else [])
    b = PcsBuilder(level, channels, prefix="x")
    for name in l.states:
        b.state(name)
    for rule in l.rules:
        src, dst, c = rule.from_state, rule.to_state, rule.channel
        if rule.op == LcsOp.WRITE:
            b.path(src, dst, writes(c, encode_message(l, flavor, rule.message)))
        elif rule.op == LcsOp.READ:
            b.path(src, dst, concat(star(word([(c, "?", separator)])), reads(c, encode_message(l, flavor, rule.message))))
        elif rule.op == LcsOp.SEND:
            copy = union(*[word([(c, "?", x), (c, "!", x), (stored, "!", x)]) for x in range(close)])
            b.path(src, dst, concat(
                writes(c, [close]), star(copy), reads(c, [close]), writes(stored, [close])
            ))
        else:
            restore = union(*[word([(stored, "?", x), (c, "!", x)]) for x in range(close)])
            b.path(src, dst, concat(
                star(word([(stored, "?", close)])),
                writes(c, [close]),
                reads(c, [close]),
                star(restore),
                reads(stored, [close]),
            ))
    model = b.build(initial=l.initial)
    logger.info(f"translated {len(l.rules)} rules ({flavor.value}) into {len(model.rules)} rules")
    return model


def build_strict_reliable_sim(cs: LcsModel) -> Pcs:
    """
    Reliable channels under strict superseding: message i is written as i
    followed by the separator p. A superseded letter leaves two adjacent
    separators or a leading separator, and both block every later read.
    """
    if cs.second_order is not None:
        raise TranslationError("second-order channels are not simulated")
    p = len(cs.messages)
    b = PcsBuilder(p, cs.channels, prefix="x")
    for name in cs.states:
        b.state(name)
    for rule in cs.rules:
        i = cs.message_index(rule.message)
        letters = [i, p]
        action = writes if rule.op == LcsOp.WRITE else reads
        b.path(rule.from_state, rule.to_state, action(rule.channel, letters))
    return b.build(initial=cs.initial)


# Source semantics

def _drop_one(contents: Tuple[str, ...]) -> List[Tuple[str, ...]]:
    return [contents[:i] + contents[i + 1:] for i in range(len(contents))]


def lossy_successors(l: LcsModel, config: LcsConfig, weak: bool = False) -> Set[LcsConfig]:
    """
    Rule steps plus single losses. Weak systems may also degrade a message
    to one of lower priority. Lossy second-order contents lose a single
    message inside a stored word or a whole stored word.
    """
    state, contents, stored = config
    index = {name: i for i, name in enumerate(l.channels)}
    result: Set[LcsConfig] = set()
    for rule in l.rules:
        if rule.from_state != state:
            continue
        i = index[rule.channel]
        current = contents[i]
        if rule.op == LcsOp.WRITE:
            updated, new_stored = current + (rule.message,), stored
        elif rule.op == LcsOp.READ:
            if not current or current[0] != rule.message:
                continue
            updated, new_stored = current[1:], stored
        elif rule.op == LcsOp.SEND:
            updated, new_stored = current, stored + (current,)
        else:
            if not stored:
                continue
            updated, new_stored = stored[0], stored[1:]
        result.add((rule.to_state, contents[:i] + (updated,) + contents[i + 1:], new_stored))
    if l.lossy:
        for i, current in enumerate(contents):
            for shorter in _drop_one(current):
                result.add((state, contents[:i] + (shorter,) + contents[i + 1:], stored))
            if weak:
                for j, message in enumerate(current):
                    for lower in l.messages[:l.message_index(message)]:
                        degraded = current[:j] + (lower,) + current[j + 1:]
                        result.add((state, contents[:i] + (degraded,) + contents[i + 1:], stored))
        for j, w in enumerate(stored):
            result.add((state, contents, stored[:j] + stored[j + 1:]))
            for shorter in _drop_one(w):
                result.add((state, contents, stored[:j] + (shorter,) + stored[j + 1:]))
    return result


def lcs_reachable(
    l: LcsModel, start: LcsConfig, weak: bool = False, max_len: int = 4, max_configs: int = 100_000
) -> Set[LcsConfig]:
    """Bounded forward exploration of the source system."""
    seen = {start}
    frontier = [start]
    while frontier and len(seen) < max_configs:
        config = frontier.pop()
        for nxt in lossy_successors(l, config, weak):
            lengths = [len(c) for c in nxt[1]] + [sum(len(w) + 1 for w in nxt[2])]
            if max(lengths, default=0) > max_len or nxt in seen:
                continue
            seen.add(nxt)
            frontier.append(nxt)
    return seen


def empty_lcs_config(l: LcsModel, state: str) -> LcsConfig:
    return (state, tuple(() for _ in l.channels), ())
