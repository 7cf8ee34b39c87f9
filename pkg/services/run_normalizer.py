"""
Run Normalizer
Turns an internal-superseding run that starts with empty channels into a
write-superseding run with the same endpoints.
"""

import itertools
import logging
from typing import List, Set, Tuple

from models.channel_system import Config, Op, Pcs, Run, Semantics, StepLabel
from services.exceptions import RunNormalizationError
from services.pcs_semantics import replay_run

logger = logging.getLogger(__name__)

Message = Tuple[int, int]  # (identity, letter)


def _doomed_messages(model: Pcs, run: Run) -> Set[int]:
    """Identities of the messages removed by internal steps somewhere in the run."""
    ids = itertools.count()
    channels: List[List[Message]] = [[] for _ in model.channels]
    doomed: Set[int] = set()
    for label, _ in run.steps:
        if label.is_internal:
            ident, _ = channels[label.channel].pop(label.position - 1)
            doomed.add(ident)
            continue
        rule = model.rules[label.rule]
        queue = channels[model.channel_index(rule.channel)]
        if rule.op == Op.WRITE:
            queue.append((next(ids), rule.letter))
        else:
            queue.pop(0)
    return doomed


def normalize_run(model: Pcs, run: Run) -> Run:
    """
    Every superseded message is dropped by the first write whose letter
    dominates the whole doomed suffix it ends; internal steps disappear.

    Raises:
        RunNormalizationError: if the run does not start with empty channels
        ReplayError: if the run is not a legal internal-superseding run
    """
    if any(run.start.channels):
        raise RunNormalizationError("normalization requires a run starting with empty channels")
    replay_run(model, run, Semantics.INTERNAL_SUPERSEDING)
    doomed = _doomed_messages(model, run)

    ids = itertools.count()
    channels: List[List[Message]] = [[] for _ in model.channels]
    result = Run(run.start)
    state = run.start.state
    for index, (label, _) in enumerate(run.steps):
        if label.is_internal:
            continue
        rule = model.rules[label.rule]
        queue = channels[model.channel_index(rule.channel)]
        dropped = 0
        if rule.op == Op.WRITE:
            while queue and queue[-1][0] in doomed and queue[-1][1] <= rule.letter:
                queue.pop()
                dropped += 1
            queue.append((next(ids), rule.letter))
        else:
            if not queue or queue[0][1] != rule.letter or queue[0][0] in doomed:
                raise RunNormalizationError(f"step {index}: read does not meet the expected message")
            queue.pop(0)
        state = rule.to_state
        config = Config(state, tuple(tuple(letter for _, letter in q) for q in channels))
        result.append(StepLabel(rule=label.rule, dropped=dropped), config)

    if result.final != run.final:
        raise RunNormalizationError(f"normalized run ends in {result.final}, expected {run.final}")
    logger.debug(f"normalized {len(run)} steps into {len(result)} write-superseding steps")
    return result
