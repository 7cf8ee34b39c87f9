"""
Serialization
Text and JSON forms of words, configurations, runs, verdicts, trees and
models. Words over letters up to 9 are digit strings; larger alphabets use
comma-separated integers. The empty word is the empty string (or `ε`).
"""

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from models.channel_system import Config, Pcs, Run, StepLabel
from models.trees import BoundedTree
from models.verdicts import Certificate, CertificateKind, Verdict
from models.words import LabeledLetter, LabeledWord, Word
from services.exceptions import ConfigurationMismatchError, MalformedWordError, ParseError
from services.pcs_semantics import check_config, validate

logger = logging.getLogger(__name__)

EMPTY_MARKS = ("", "ε", "eps")


# Words

def parse_word(text: str, level: Optional[int] = None) -> Word:
    text = text.strip()
    if text in EMPTY_MARKS:
        return ()
    try:
        if "," in text or (level is not None and level > 9):
            letters = tuple(int(part) for part in text.split(","))
        else:
            letters = tuple(int(ch) for ch in text)
    except ValueError:
        raise MalformedWordError(f"'{text}' is not a word")
    if level is not None:
        for letter in letters:
            if letter < 0 or letter > level:
                raise MalformedWordError(f"letter {letter} exceeds level {level}")
    return letters


def format_word(word: Word, level: Optional[int] = None) -> str:
    if (level is not None and level > 9) or any(letter > 9 for letter in word):
        return ",".join(str(letter) for letter in word)
    return "".join(str(letter) for letter in word)


# Configurations

def _channel_separator(model: Pcs) -> str:
    return ";" if model.level > 9 else ","


def parse_config(text: str, model: Pcs) -> Config:
    """
    `state:word,word,...` in channel order; with letters above 9 the
    channels are separated by `;`.
    """
    state, sep, rest = text.partition(":")
    if not sep:
        raise ParseError(f"configuration '{text}' lacks ':'")
    parts = rest.split(_channel_separator(model)) if model.arity else []
    if len(parts) != model.arity:
        raise ConfigurationMismatchError(f"'{text}' lists {len(parts)} channels, model has {model.arity}")
    config = Config(state.strip(), tuple(parse_word(part, model.level) for part in parts))
    check_config(model, config)
    return config


def format_config(config: Config, model: Pcs) -> str:
    words = [format_word(w, model.level) for w in config.channels]
    return f"{config.state}:{_channel_separator(model).join(words)}"


def config_to_json(config: Config, model: Pcs) -> Dict[str, Any]:
    return {
        "state": config.state,
        "channels": {name: format_word(w, model.level) for name, w in zip(model.channels, config.channels)},
    }


def config_from_json(data: Dict[str, Any], model: Pcs) -> Config:
    channels = data.get("channels", {})
    unknown = set(channels) - set(model.channels)
    if unknown:
        raise ConfigurationMismatchError(f"unknown channels {sorted(unknown)}")
    config = Config(data["state"], tuple(parse_word(channels.get(name, ""), model.level) for name in model.channels))
    check_config(model, config)
    return config


# Runs

def label_to_json(label: StepLabel, model: Pcs) -> Dict[str, Any]:
    if label.is_internal:
        return {"internal": {"channel": model.channels[label.channel], "position": label.position}}
    data: Dict[str, Any] = {"rule": label.rule}
    if label.dropped:
        data["dropped"] = label.dropped
    return data


def label_from_json(data: Dict[str, Any], model: Pcs) -> StepLabel:
    if "internal" in data:
        internal = data["internal"]
        return StepLabel(channel=model.channel_index(internal["channel"]), position=int(internal["position"]))
    rule = int(data["rule"])
    if not 0 <= rule < len(model.rules):
        raise ParseError(f"rule index {rule} out of range")
    return StepLabel(rule=rule, dropped=int(data.get("dropped", 0)))


def run_to_json(run: Run, model: Pcs) -> Dict[str, Any]:
    return {
        "start": config_to_json(run.start, model),
        "steps": [
            {"label": label_to_json(label, model), "config": config_to_json(config, model)}
            for label, config in run.steps
        ],
        "deadlocked": run.deadlocked,
    }


def run_from_json(data: Dict[str, Any], model: Pcs) -> Run:
    run = Run(config_from_json(data["start"], model), deadlocked=bool(data.get("deadlocked", False)))
    for step in data.get("steps", []):
        run.append(label_from_json(step["label"], model), config_from_json(step["config"], model))
    return run


# Verdicts

def verdict_to_json(verdict: Verdict, model: Pcs) -> Dict[str, Any]:
    certificate = verdict.certificate
    body: Dict[str, Any] = {"kind": certificate.kind.value}
    if certificate.run is not None:
        body["run"] = run_to_json(certificate.run, model)
    if certificate.kind == CertificateKind.BASIS:
        body["basis"] = [config_to_json(c, model) for c in certificate.basis]
    if certificate.indices is not None:
        body["indices"] = list(certificate.indices)
    return {"answer": verdict.holds, "certificate": body}


def verdict_from_json(data: Dict[str, Any], model: Pcs) -> Verdict:
    body = data["certificate"]
    certificate = Certificate(
        CertificateKind(body["kind"]),
        run=run_from_json(body["run"], model) if "run" in body else None,
        basis=[config_from_json(c, model) for c in body.get("basis", [])],
        indices=tuple(body["indices"]) if "indices" in body else None,
    )
    return Verdict(bool(data["answer"]), certificate)


# Trees

_LABEL = re.compile(r"[A-Za-z0-9_]+")


class TreeParser:
    """tree := label? ( '(' ( '(' tree ')' )* ')' )?"""

    def __init__(self, text: str):
        self.text = "".join(text.split())
        self.pos = 0

    def parse(self) -> BoundedTree:
        tree = self._tree()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected '{self.text[self.pos]}' in tree", self.pos)
        return tree

    def _tree(self) -> BoundedTree:
        label = None
        match = _LABEL.match(self.text, self.pos)
        if match:
            label = match.group(0)
            self.pos = match.end()
        children: List[BoundedTree] = []
        if self.text.startswith("(", self.pos):
            self.pos += 1
            while self.text.startswith("(", self.pos):
                self.pos += 1
                children.append(self._tree())
                self._expect(")")
            self._expect(")")
        return BoundedTree(tuple(children), label)

    def _expect(self, ch: str) -> None:
        if not self.text.startswith(ch, self.pos):
            raise ParseError(f"expected '{ch}' in tree", self.pos)
        self.pos += 1


def parse_tree(text: str) -> BoundedTree:
    return TreeParser(text).parse()


def format_tree(tree: BoundedTree) -> str:
    label = "" if tree.label is None else str(tree.label)
    if not tree.children:
        return label
    return label + "(" + "".join(f"({format_tree(child)})" for child in tree.children) + ")"


# Models

def load_model(source: Union[str, Path, Dict[str, Any]]) -> Pcs:
    """Read and validate a model from a JSON file or an already decoded document."""
    if not isinstance(source, dict):
        source = json.loads(Path(source).read_text(encoding="utf-8"))
    return validate(Pcs.model_validate(source))


def model_to_json(model: Pcs) -> Dict[str, Any]:
    return model.model_dump(mode="json", by_alias=True, exclude_none=True)


def dump_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, sort_keys=False)


# Labeled words

def parse_labeled_word(text: str) -> LabeledWord:
    """Comma-separated `priority:label` items; the label may be empty."""
    text = text.strip()
    if text in EMPTY_MARKS:
        return ()
    letters = []
    for item in text.split(","):
        priority, sep, label = item.partition(":")
        if not sep or not priority.strip().isdigit():
            raise MalformedWordError(f"'{item}' is not a labeled letter")
        letters.append(LabeledLetter(int(priority), label.strip()))
    return tuple(letters)
