"""
Channel System Models
Priority channel systems, their rules, configurations and runs
"""

import enum
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from models.words import Word


class Semantics(str, enum.Enum):
    """Step relation used to explore a channel system"""
    RELIABLE = "reliable"
    WRITE_SUPERSEDING = "write_superseding"
    INTERNAL_SUPERSEDING = "internal_superseding"
    STRICT = "strict"


class Op(str, enum.Enum):
    """Channel operation of a rule"""
    WRITE = "!"
    READ = "?"


class Rule(BaseModel):
    """
    A transition `from --channel op letter--> to`.
    Serialized with the keys `from` and `to`.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    from_state: str = Field(alias="from")
    channel: str
    op: Op
    letter: int = Field(ge=0)
    to_state: str = Field(alias="to")

    def __str__(self):
        return f"{self.from_state} -{self.channel}{self.op.value}{self.letter}-> {self.to_state}"


class Pcs(BaseModel):
    """
    A priority channel system: control states, channels over the
    alphabet {0, ..., level} and a list of rules.
    """
    level: int = Field(ge=0)
    channels: List[str]
    states: List[str]
    initial: Optional[str] = None
    rules: List[Rule] = Field(default_factory=list)

    _channel_index: Dict[str, int] = PrivateAttr(default_factory=dict)
    _rules_from: Dict[str, List[int]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self.reindex()

    def reindex(self) -> None:
        """Rebuild lookup tables after the model was edited in place."""
        self._channel_index = {name: i for i, name in enumerate(self.channels)}
        self._rules_from = {}
        for i, rule in enumerate(self.rules):
            self._rules_from.setdefault(rule.from_state, []).append(i)

    def channel_index(self, name: str) -> int:
        return self._channel_index[name]

    def rules_from(self, state: str) -> List[int]:
        """Indices of the rules leaving `state`, in declaration order."""
        return self._rules_from.get(state, [])

    @property
    def arity(self) -> int:
        return len(self.channels)


@dataclass(frozen=True)
class Config:
    """A control state together with one word per channel (channel order of the model)."""
    state: str
    channels: Tuple[Word, ...]

    def with_channel(self, index: int, word: Word, state: Optional[str] = None) -> "Config":
        contents = self.channels[:index] + (tuple(word),) + self.channels[index + 1:]
        return Config(self.state if state is None else state, contents)

    def with_state(self, state: str) -> "Config":
        return replace(self, state=state)

    @classmethod
    def empty(cls, state: str, arity: int) -> "Config":
        return cls(state, ((),) * arity)


@dataclass(frozen=True)
class StepLabel:
    """
    Label of a single step.

    Rule steps carry the rule index (and, under write-superseding, how many
    letters the write dropped). Internal superseding steps carry the channel
    index and the 1-based position of the removed letter.
    """
    rule: Optional[int] = None
    channel: Optional[int] = None
    position: Optional[int] = None
    dropped: int = 0

    @property
    def is_internal(self) -> bool:
        return self.rule is None


@dataclass
class Run:
    start: Config
    steps: List[Tuple[StepLabel, Config]] = field(default_factory=list)
    deadlocked: bool = False

    @property
    def final(self) -> Config:
        return self.steps[-1][1] if self.steps else self.start

    def configs(self) -> List[Config]:
        return [self.start] + [config for _, config in self.steps]

    def append(self, label: StepLabel, config: Config) -> None:
        self.steps.append((label, config))

    def extend(self, other: "Run") -> None:
        """Append the steps of a run that starts where this one ends."""
        self.steps.extend(other.steps)

    def __len__(self):
        return len(self.steps)
