"""
WSTS Verifier
Backward coverability, exact reachability, termination and inevitability
for priority channel systems under internal superseding.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

from config.settings import settings
from models.channel_system import Config, Op, Pcs, Rule, Run, Semantics, StepLabel
from models.verdicts import Certificate, CertificateKind, Verdict
from models.words import Word
from services.exceptions import SearchBudgetExceededError, UnsupportedSemanticsError
from services.pcs_semantics import apply_rule, check_config, config_leq, successors
from services.priority_order import supersede_path

logger = logging.getLogger(__name__)


def strictly_decreasing_words(top: int) -> List[Word]:
    """Every strictly decreasing word over {0, ..., top}, the empty word included."""
    words: List[Word] = [()]
    for letter in range(top, -1, -1):
        words += [w + (letter,) for w in words]
    return words


def minimal_elements(configs: Iterable[Config]) -> List[Config]:
    result: List[Config] = []
    for config in configs:
        if any(config_leq(kept, config) for kept in result):
            continue
        result = [kept for kept in result if not config_leq(config, kept)]
        result.append(config)
    return result


class UpwardClosedSet:
    """An upward-closed set of configurations represented by its minimal basis."""

    def __init__(self, basis: Iterable[Config] = ()):
        self.basis: List[Config] = minimal_elements(basis)

    def contains(self, config: Config) -> bool:
        return any(config_leq(b, config) for b in self.basis)

    def witness_below(self, config: Config) -> Optional[Config]:
        return next((b for b in self.basis if config_leq(b, config)), None)

    def add(self, config: Config) -> bool:
        """Insert unless already covered; returns whether the basis changed."""
        if self.contains(config):
            return False
        self.basis = [b for b in self.basis if not config_leq(config, b)]
        self.basis.append(config)
        return True

    def __len__(self):
        return len(self.basis)


def pre_basis(model: Pcs, rule: Rule, target: Config) -> List[Config]:
    """
    Minimal configurations from which one reliable application of `rule`
    lands above `target`.
    """
    if rule.to_state != target.state:
        return []
    c = model.channel_index(rule.channel)
    y = target.channels[c]
    source = target.with_state(rule.from_state)
    if rule.op == Op.READ:
        return [source.with_channel(c, (rule.letter,) + y)]
    # the written letter has to be the last letter matched by y
    if not y or y[-1] != rule.letter:
        return []
    u = y[:-1]
    return minimal_elements(source.with_channel(c, u + z) for z in strictly_decreasing_words(rule.letter))


def descend(model: Pcs, start: Config, goal: Config) -> Run:
    """Internal superseding steps rewriting `start` into `goal` (goal must be below start)."""
    run = Run(start)
    current = start
    for c, (low, high) in enumerate(zip(goal.channels, start.channels)):
        path = supersede_path(low, high)
        if path is None:
            raise ValueError(f"{goal} is not below {start}")
        for position in path:
            word = current.channels[c]
            current = current.with_channel(c, word[:position - 1] + word[position:])
            run.append(StepLabel(channel=c, position=position), current)
    return run


@dataclass
class _Origin:
    rule: Optional[int]
    parent: Optional[Config]


class WstsVerifier:
    """
    Decision procedures for one channel system.

    Args:
        model: validated channel system
        max_configs: bound on basis size and search-tree size
    """

    def __init__(self, model: Pcs, max_configs: Optional[int] = None):
        self.model = model
        self.max_configs = max_configs if max_configs is not None else settings.pcs_max_configs

    @staticmethod
    def _require_internal(sem: Semantics) -> None:
        if Semantics(sem) != Semantics.INTERNAL_SUPERSEDING:
            raise UnsupportedSemanticsError(f"verification runs under internal superseding, not {sem}")

    def cover(self, c0: Config, target: Iterable[Config], sem: Semantics = Semantics.INTERNAL_SUPERSEDING) -> Verdict:
        """
        Backward saturation of the upward closure of `target`.

        Returns:
            RUN certificate (forward witness ending above target) or the
            saturated BASIS
        """
        self._require_internal(sem)
        check_config(self.model, c0)
        basis = UpwardClosedSet()
        origin: Dict[Config, _Origin] = {}
        queue = deque()
        for t in target:
            check_config(self.model, t)
            if basis.add(t):
                origin[t] = _Origin(None, None)
                queue.append(t)
        rounds = 0
        while queue and not basis.contains(c0):
            current = queue.popleft()
            if current not in basis.basis:
                continue
            rounds += 1
            for i, rule in enumerate(self.model.rules):
                for pred in pre_basis(self.model, rule, current):
                    if basis.add(pred):
                        origin[pred] = _Origin(i, current)
                        queue.append(pred)
            if len(basis) > self.max_configs:
                raise SearchBudgetExceededError(f"backward basis exceeded {self.max_configs} elements")
        logger.info(f"backward saturation stopped after {rounds} expansions with {len(basis)} basis elements")
        below = basis.witness_below(c0)
        if below is None:
            return Verdict(False, Certificate(CertificateKind.BASIS, basis=list(basis.basis)))
        return Verdict(True, Certificate(CertificateKind.RUN, run=self._witness(c0, below, origin)))

    def _witness(self, c0: Config, below: Config, origin: Dict[Config, _Origin]) -> Run:
        run = Run(c0)
        current = c0
        element = below
        while True:
            info = origin[element]
            if info.rule is None:
                break
            run.extend(descend(self.model, current, element))
            current = apply_rule(self.model, element, info.rule)
            run.append(StepLabel(rule=info.rule), current)
            element = info.parent
        # current lies above a target element
        return run

    def reach_exact(self, c0: Config, d: Config, sem: Semantics = Semantics.INTERNAL_SUPERSEDING) -> Verdict:
        """Coverability of {d} followed by internal steps down to d itself."""
        verdict = self.cover(c0, [d], sem)
        if verdict.holds:
            run = verdict.certificate.run
            run.extend(descend(self.model, run.final, d))
        return verdict

    def _successor_configs(self, config: Config) -> List[Tuple[StepLabel, Config]]:
        return successors(self.model, config, Semantics.INTERNAL_SUPERSEDING)

    def _tree_search(self, c0: Config, goal: Optional[Set[str]]) -> Verdict:
        """
        Depth-first search of the run tree, closing a branch at goal states or
        at the first descendant above one of its ancestors.
        """
        first = self._successor_configs(c0)
        path_configs: List[Config] = [c0]
        path_labels: List[StepLabel] = []
        stack = [iter(first)]
        finished: Set[Config] = set()
        visited = 0

        def run_to(last: int) -> Run:
            run = Run(path_configs[0])
            for label, config in zip(path_labels[:last], path_configs[1:last + 1]):
                run.append(label, config)
            return run

        if goal is not None and c0.state in goal:
            return Verdict(True, Certificate(CertificateKind.RUN, run=Run(c0)))
        if goal is not None and not first:
            return Verdict(False, Certificate(CertificateKind.DEADLOCK, run=Run(c0, deadlocked=True)))

        while stack:
            try:
                label, nxt = next(stack[-1])
            except StopIteration:
                stack.pop()
                finished.add(path_configs.pop())
                if path_labels:
                    path_labels.pop()
                continue
            visited += 1
            if visited > self.max_configs:
                raise SearchBudgetExceededError(f"run tree exceeded {self.max_configs} nodes")
            if goal is not None and nxt.state in goal:
                continue
            if nxt in finished:
                continue
            path_configs.append(nxt)
            path_labels.append(label)
            j = len(path_configs) - 1
            for i in range(j):
                if config_leq(path_configs[i], nxt):
                    logger.info(f"domination between positions {i} and {j}")
                    return Verdict(False, Certificate(CertificateKind.DOMINATION, run=run_to(j), indices=(i, j)))
            options = self._successor_configs(nxt)
            if not options and goal is not None:
                run = run_to(j)
                run.deadlocked = True
                return Verdict(False, Certificate(CertificateKind.DEADLOCK, run=run))
            stack.append(iter(options))
        logger.info(f"run tree exhausted after {visited} nodes")
        return Verdict(True, Certificate(CertificateKind.RUN, run=Run(c0)))

    def terminate(self, c0: Config, sem: Semantics = Semantics.INTERNAL_SUPERSEDING) -> Verdict:
        """True iff every run from c0 is finite; otherwise a DOMINATION certificate."""
        self._require_internal(sem)
        check_config(self.model, c0)
        return self._tree_search(c0, None)

    def inevitable_states(self, c0: Config, goal: Iterable[str], sem: Semantics = Semantics.INTERNAL_SUPERSEDING) -> Verdict:
        """True iff every maximal run from c0 visits a state of `goal`."""
        self._require_internal(sem)
        check_config(self.model, c0)
        return self._tree_search(c0, set(goal))
