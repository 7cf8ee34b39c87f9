"""
Channel System Semantics
Validation, successor computation, simulation, replay and bounded forward
exploration of priority channel systems.
"""

import logging
import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from models.channel_system import Config, Op, Pcs, Rule, Run, Semantics, StepLabel
from services.exceptions import ConfigurationMismatchError, ModelValidationError, ReplayError
from services.priority_order import pleq, supersede_positions

logger = logging.getLogger(__name__)

Successor = Tuple[StepLabel, Config]


def validate(model: Pcs) -> Pcs:
    """
    Check names, letters and rule references.

    Raises:
        ModelValidationError: listing every violation found
    """
    violations: List[str] = []
    for kind, names in (("state", model.states), ("channel", model.channels)):
        seen: Set[str] = set()
        for name in names:
            if name in seen:
                violations.append(f"duplicate {kind} name '{name}'")
            seen.add(name)
    states = set(model.states)
    channels = set(model.channels)
    if model.initial is not None and model.initial not in states:
        violations.append(f"initial state '{model.initial}' is not declared")
    for i, rule in enumerate(model.rules):
        if rule.from_state not in states:
            violations.append(f"rule {i}: unknown source state '{rule.from_state}'")
        if rule.to_state not in states:
            violations.append(f"rule {i}: unknown target state '{rule.to_state}'")
        if rule.channel not in channels:
            violations.append(f"rule {i}: unknown channel '{rule.channel}'")
        if rule.letter > model.level:
            violations.append(f"rule {i}: letter {rule.letter} exceeds level {model.level}")
    if violations:
        raise ModelValidationError(violations)
    model.reindex()
    return model


def check_config(model: Pcs, config: Config) -> None:
    if len(config.channels) != model.arity:
        raise ConfigurationMismatchError(
            f"configuration has {len(config.channels)} channels, model has {model.arity}"
        )
    if config.state not in model.states:
        raise ConfigurationMismatchError(f"unknown state '{config.state}'")
    for word in config.channels:
        if any(letter < 0 or letter > model.level for letter in word):
            raise ConfigurationMismatchError(f"channel content {word} outside alphabet 0..{model.level}")


def config_leq(c1: Config, c2: Config) -> bool:
    """Same state and channel-wise priority embedding."""
    if len(c1.channels) != len(c2.channels):
        raise ConfigurationMismatchError(f"arity {len(c1.channels)} vs {len(c2.channels)}")
    return c1.state == c2.state and all(pleq(x, y) for x, y in zip(c1.channels, c2.channels))


def apply_rule(model: Pcs, config: Config, rule_index: int) -> Optional[Config]:
    """Reliable application of a rule, or None when it is disabled."""
    rule = model.rules[rule_index]
    if rule.from_state != config.state:
        return None
    c = model.channel_index(rule.channel)
    word = config.channels[c]
    if rule.op == Op.WRITE:
        return config.with_channel(c, word + (rule.letter,), rule.to_state)
    if word and word[0] == rule.letter:
        return config.with_channel(c, word[1:], rule.to_state)
    return None


def _write_superseding(model: Pcs, config: Config, rule_index: int, rule: Rule) -> List[Successor]:
    c = model.channel_index(rule.channel)
    word = config.channels[c]
    droppable = 0
    while droppable < len(word) and word[len(word) - 1 - droppable] <= rule.letter:
        droppable += 1
    return [
        (StepLabel(rule=rule_index, dropped=k), config.with_channel(c, word[:len(word) - k] + (rule.letter,), rule.to_state))
        for k in range(droppable + 1)
    ]


def internal_successors(config: Config, strict: bool = False) -> List[Successor]:
    result: List[Successor] = []
    for c, word in enumerate(config.channels):
        for k in supersede_positions(word, strict):
            result.append((StepLabel(channel=c, position=k), config.with_channel(c, word[:k - 1] + word[k:])))
    return result


def successors(model: Pcs, config: Config, sem: Semantics) -> List[Successor]:
    """Every labeled one-step successor of `config` (rule steps first, in rule order)."""
    sem = Semantics(sem)
    result: List[Successor] = []
    for i in model.rules_from(config.state):
        rule = model.rules[i]
        if rule.op == Op.WRITE and sem == Semantics.WRITE_SUPERSEDING:
            result.extend(_write_superseding(model, config, i, rule))
            continue
        nxt = apply_rule(model, config, i)
        if nxt is not None:
            result.append((StepLabel(rule=i), nxt))
    if sem == Semantics.INTERNAL_SUPERSEDING:
        result.extend(internal_successors(config))
    elif sem == Semantics.STRICT:
        result.extend(internal_successors(config, strict=True))
    return result


def run_simulate(model: Pcs, c0: Config, sem: Semantics, max_steps: int, seed: int) -> Run:
    """Random walk choosing uniformly among successors; stops at max_steps or a deadlock."""
    check_config(model, c0)
    rng = random.Random(seed)
    run = Run(c0)
    current = c0
    for _ in range(max_steps):
        options = successors(model, current, sem)
        if not options:
            run.deadlocked = True
            break
        label, current = rng.choice(options)
        run.append(label, current)
    logger.debug(f"simulated {len(run)} steps (seed={seed}, deadlocked={run.deadlocked})")
    return run


@dataclass
class ReachableSet:
    configs: Set[Config]
    truncated: bool
    edges: Dict[Config, List[Config]]


def enumerate_reachable(
    model: Pcs,
    c0: Config,
    sem: Semantics,
    max_configs: int,
    max_channel_len: int,
) -> ReachableSet:
    """
    Breadth-first exploration. Successors with a channel longer than
    max_channel_len, and new configurations beyond max_configs, are dropped
    and flag the result as truncated.
    """
    check_config(model, c0)
    seen: Set[Config] = {c0}
    edges: Dict[Config, List[Config]] = {}
    queue = deque([c0])
    truncated = False
    while queue:
        config = queue.popleft()
        targets: List[Config] = []
        for _, nxt in successors(model, config, sem):
            if any(len(word) > max_channel_len for word in nxt.channels):
                truncated = True
                continue
            if nxt not in seen:
                if len(seen) >= max_configs:
                    truncated = True
                    continue
                seen.add(nxt)
                queue.append(nxt)
            targets.append(nxt)
        edges[config] = targets
    if truncated:
        logger.warning(f"forward exploration truncated at {len(seen)} configurations")
    else:
        logger.info(f"forward exploration complete: {len(seen)} configurations")
    return ReachableSet(seen, truncated, edges)


def _label_matches(expected: StepLabel, actual: StepLabel) -> bool:
    if expected.is_internal:
        return actual.is_internal and (expected.channel, expected.position) == (actual.channel, actual.position)
    return actual.rule == expected.rule


def replay_run(model: Pcs, run: Run, sem: Semantics) -> None:
    """
    Check that every step of `run` is a legal step under `sem`.

    Raises:
        ReplayError: for the first illegal step (0-based index)
    """
    check_config(model, run.start)
    current = run.start
    for index, (label, config) in enumerate(run.steps):
        options = successors(model, current, sem)
        if not any(_label_matches(label, got) and nxt == config for got, nxt in options):
            raise ReplayError(index, f"no {sem.value} step from {current} to {config}")
        current = config


def internalize_run(model: Pcs, run: Run) -> Run:
    """
    Rewrite a write-superseding run as an internal-superseding run with the
    same endpoints: a write dropping j letters becomes the reliable write
    followed by j internal steps removing the letters just before it.
    """
    result = Run(run.start, deadlocked=False)
    current = run.start
    for label, config in run.steps:
        if label.is_internal:
            result.append(label, config)
            current = config
            continue
        rule = model.rules[label.rule]
        written = apply_rule(model, current, label.rule)
        result.append(StepLabel(rule=label.rule), written)
        current = written
        if rule.op == Op.WRITE:
            c = model.channel_index(rule.channel)
            for _ in range(label.dropped):
                word = current.channels[c]
                position = len(word) - 1
                current = current.with_channel(c, word[:position - 1] + word[position:])
                result.append(StepLabel(channel=c, position=position), current)
        if current != config:
            raise ReplayError(len(result) - 1, "write-superseding step does not match its label")
    return result
