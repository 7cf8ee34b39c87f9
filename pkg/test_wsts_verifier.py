"""
Tests for backward coverability, termination, inevitability and run normalization.
"""

import itertools
import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from models.channel_system import Config, Pcs, Run, Semantics, StepLabel
from models.verdicts import CertificateKind
from services.exceptions import RunNormalizationError, SearchBudgetExceededError, UnsupportedSemanticsError
from services.pcs_semantics import apply_rule, config_leq, enumerate_reachable, replay_run, run_simulate, validate
from services.priority_order import supersede_successors
from services.run_normalizer import normalize_run
from services.wsts_verifier import (
    UpwardClosedSet,
    WstsVerifier,
    minimal_elements,
    pre_basis,
    strictly_decreasing_words,
)


def w(text):
    return tuple(int(ch) for ch in text)


def cfg(state, text):
    return Config(state, (w(text),))


def example_pcs():
    return validate(Pcs.model_validate({
        "level": 3,
        "channels": ["c"],
        "states": ["p", "q"],
        "initial": "p",
        "rules": [
            {"from": "p", "channel": "c", "op": "!", "letter": 1, "to": "q"},
            {"from": "q", "channel": "c", "op": "?", "letter": 3, "to": "p"},
            {"from": "p", "channel": "c", "op": "!", "letter": 0, "to": "p"},
            {"from": "q", "channel": "c", "op": "!", "letter": 3, "to": "q"},
        ],
    }))


def one_shot_pcs(op="!"):
    """p --c op 0--> q with nothing leaving q."""
    return validate(Pcs.model_validate({
        "level": 1,
        "channels": ["c"],
        "states": ["p", "q"],
        "rules": [{"from": "p", "channel": "c", "op": op, "letter": 0, "to": "q"}],
    }))


def test_strictly_decreasing_words():
    """Test the suffix candidates of a write."""
    words = strictly_decreasing_words(3)
    assert len(words) == 16
    assert () in words and w("3210") in words
    assert all(list(x) == sorted(x, reverse=True) and len(set(x)) == len(x) for x in words)


def test_pre_basis():
    """Test predecessor bases of reads and writes."""
    model = example_pcs()
    read, write_three, write_one = model.rules[1], model.rules[3], model.rules[0]
    assert pre_basis(model, read, cfg("p", "0")) == [cfg("q", "30")]
    assert pre_basis(model, read, cfg("q", "0")) == []
    assert pre_basis(model, write_three, cfg("q", "")) == []
    assert pre_basis(model, write_three, cfg("q", "1")) == []
    basis = pre_basis(model, write_three, cfg("q", "3"))
    assert len(basis) == 16
    assert cfg("q", "") in basis and cfg("q", "210") in basis
    assert set(pre_basis(model, write_one, cfg("q", "21"))) == {cfg("p", "2"), cfg("p", "20"), cfg("p", "21"), cfg("p", "210")}


def test_cover_positive_with_run():
    """Test coverability with a replayable witness run."""
    model = example_pcs()
    verdict = WstsVerifier(model).cover(cfg("p", ""), [cfg("q", "3")])
    assert verdict.holds
    assert verdict.certificate.kind == CertificateKind.RUN
    run = verdict.certificate.run
    replay_run(model, run, Semantics.INTERNAL_SUPERSEDING)
    assert run.start == cfg("p", "")
    assert config_leq(cfg("q", "3"), run.final)


def test_cover_negative_with_basis():
    """Test that an uncoverable target returns the saturated basis."""
    model = example_pcs()
    verdict = WstsVerifier(model).cover(cfg("p", ""), [cfg("q", "0")])
    assert not verdict.holds
    assert verdict.certificate.kind == CertificateKind.BASIS
    assert verdict.certificate.basis == [cfg("q", "0")]


def test_cover_start_already_above_target():
    """Test the zero-step witness."""
    verdict = WstsVerifier(example_pcs()).cover(cfg("q", "22011"), [cfg("q", "201")])
    assert verdict.holds
    assert len(verdict.certificate.run) == 0


def test_reach_exact():
    """Test exact reachability through a final descent."""
    model = example_pcs()
    verifier = WstsVerifier(model)
    verdict = verifier.reach_exact(cfg("p", ""), cfg("q", "1"))
    assert verdict.holds
    assert verdict.certificate.run.final == cfg("q", "1")
    replay_run(model, verdict.certificate.run, Semantics.INTERNAL_SUPERSEDING)

    verdict = verifier.reach_exact(cfg("p", "0200"), cfg("q", "21"))
    assert verdict.holds
    assert verdict.certificate.run.final == cfg("q", "21")
    replay_run(model, verdict.certificate.run, Semantics.INTERNAL_SUPERSEDING)

    assert not verifier.reach_exact(cfg("p", ""), cfg("q", "0")).holds


def test_terminate_finds_domination():
    """Test that a looping system yields a domination certificate."""
    model = example_pcs()
    verdict = WstsVerifier(model).terminate(cfg("p", ""))
    assert not verdict.holds
    certificate = verdict.certificate
    assert certificate.kind == CertificateKind.DOMINATION
    i, j = certificate.indices
    assert i < j
    configs = certificate.run.configs()
    assert config_leq(configs[i], configs[j])
    replay_run(model, certificate.run, Semantics.INTERNAL_SUPERSEDING)


def test_terminate_holds():
    """Test a system whose run tree is finite."""
    verdict = WstsVerifier(one_shot_pcs()).terminate(cfg("p", ""))
    assert verdict.holds


def test_inevitable_states():
    """Test inevitability with domination and deadlock counterexamples."""
    verifier = WstsVerifier(example_pcs())
    assert verifier.inevitable_states(cfg("p", ""), ["p"]).holds
    looping = verifier.inevitable_states(cfg("p", ""), ["q"])
    assert not looping.holds
    assert looping.certificate.kind == CertificateKind.DOMINATION

    assert WstsVerifier(one_shot_pcs()).inevitable_states(cfg("p", ""), ["q"]).holds
    stuck = WstsVerifier(one_shot_pcs("?")).inevitable_states(cfg("p", ""), ["q"])
    assert not stuck.holds
    assert stuck.certificate.kind == CertificateKind.DEADLOCK
    assert stuck.certificate.run.deadlocked


def test_verification_rejects_other_semantics():
    """Test that only internal superseding is verified."""
    verifier = WstsVerifier(example_pcs())
    for sem in (Semantics.RELIABLE, Semantics.WRITE_SUPERSEDING, Semantics.STRICT):
        with pytest.raises(UnsupportedSemanticsError):
            verifier.cover(cfg("p", ""), [cfg("q", "3")], sem)
        with pytest.raises(UnsupportedSemanticsError):
            verifier.terminate(cfg("p", ""), sem)


def test_search_budget():
    """Test that the tree search stops at its configured size."""
    with pytest.raises(SearchBudgetExceededError):
        WstsVerifier(example_pcs(), max_configs=1).terminate(cfg("p", ""))


def test_normalize_run():
    """Test turning internal steps into superseding writes."""
    model = example_pcs()
    run = Run(cfg("p", ""))
    run.append(StepLabel(rule=2), cfg("p", "0"))
    run.append(StepLabel(rule=2), cfg("p", "00"))
    run.append(StepLabel(rule=0), cfg("q", "001"))
    run.append(StepLabel(channel=0, position=2), cfg("q", "01"))
    run.append(StepLabel(channel=0, position=1), cfg("q", "1"))
    run.append(StepLabel(rule=3), cfg("q", "13"))
    run.append(StepLabel(channel=0, position=1), cfg("q", "3"))
    run.append(StepLabel(rule=1), cfg("p", ""))

    normalized = normalize_run(model, run)
    replay_run(model, normalized, Semantics.WRITE_SUPERSEDING)
    assert len(normalized) == 5
    assert not any(label.is_internal for label, _ in normalized.steps)
    assert [label.dropped for label, _ in normalized.steps] == [0, 1, 1, 1, 0]
    assert normalized.final == run.final


def test_normalize_requires_empty_start():
    """Test the empty-channel precondition."""
    run = Run(cfg("p", "0"))
    with pytest.raises(RunNormalizationError):
        normalize_run(example_pcs(), run)


def small_pcs():
    """Level-2 system mixing reads and writes on one channel."""
    return validate(Pcs.model_validate({
        "level": 2,
        "channels": ["c"],
        "states": ["p", "q"],
        "rules": [
            {"from": "p", "channel": "c", "op": "!", "letter": 1, "to": "q"},
            {"from": "q", "channel": "c", "op": "?", "letter": 2, "to": "p"},
            {"from": "p", "channel": "c", "op": "!", "letter": 0, "to": "p"},
            {"from": "q", "channel": "c", "op": "!", "letter": 2, "to": "q"},
            {"from": "q", "channel": "c", "op": "?", "letter": 0, "to": "q"},
        ],
    }))


def random_pcs(rng, level=2, states=("p", "q", "r"), size=4):
    rules = [
        {
            "from": rng.choice(states),
            "channel": "c",
            "op": rng.choice(["!", "?"]),
            "letter": rng.randint(0, level),
            "to": rng.choice(states),
        }
        for _ in range(size)
    ]
    return validate(Pcs.model_validate({"level": level, "channels": ["c"], "states": list(states), "rules": rules}))


def words(level, length):
    for n in range(length + 1):
        yield from itertools.product(range(level + 1), repeat=n)


def pairwise_incomparable(configs):
    return all(not config_leq(a, b) for a in configs for b in configs if a != b)


def has_cycle(edges):
    """Depth-first search for a cycle in a finite successor graph."""
    colour = {}
    for root in edges:
        if root in colour:
            continue
        colour[root] = "open"
        stack = [(root, iter(edges.get(root, ())))]
        while stack:
            node, children = stack[-1]
            child = next(children, None)
            if child is None:
                colour[node] = "done"
                stack.pop()
            elif colour.get(child) == "open":
                return True
            elif child not in colour:
                colour[child] = "open"
                stack.append((child, iter(edges.get(child, ()))))
    return False


def below(x):
    """Every word reachable from x by superseding, x included."""
    seen = {x}
    stack = [x]
    while stack:
        for z in supersede_successors(stack.pop()):
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def test_pre_basis_matches_brute_force():
    """Test each predecessor basis against superseding followed by one reliable rule step."""
    model = small_pcs()
    lowered = {x: below(x) for x in words(2, 4)}
    for state in model.states:
        for y in words(2, 2):
            target = Config(state, (y,))
            for i, rule in enumerate(model.rules):
                basis = pre_basis(model, rule, target)
                assert pairwise_incomparable(basis)
                closure = UpwardClosedSet(basis)
                for x, xs in lowered.items():
                    c = Config(rule.from_state, (x,))
                    steps = (apply_rule(model, Config(rule.from_state, (z,)), i) for z in xs)
                    expected = any(nxt is not None and config_leq(target, nxt) for nxt in steps)
                    assert closure.contains(c) == expected, (rule, target, c)


def test_upward_closed_set_stays_minimal():
    """Test that every insertion keeps the basis an antichain that still covers all inserted configurations."""
    rng = random.Random(3)
    pool = [Config(state, (x,)) for state in ("p", "q") for x in words(2, 4)]
    for _ in range(20):
        closed = UpwardClosedSet()
        inserted = []
        for config in rng.sample(pool, 40):
            closed.add(config)
            inserted.append(config)
            assert pairwise_incomparable(closed.basis)
            assert all(closed.contains(c) for c in inserted)
            assert all(any(config_leq(b, c) for c in inserted) for b in closed.basis)
    assert minimal_elements([cfg("p", "01"), cfg("p", "1"), cfg("p", "21")]) == [cfg("p", "1")]


def test_cover_agrees_with_forward_search():
    """Test coverability on random systems against breadth-first exploration, replaying every witness."""
    rng = random.Random(5)
    for _ in range(60):
        model = random_pcs(rng)
        verifier = WstsVerifier(model, max_configs=5_000)
        start = Config(rng.choice(model.states), (tuple(rng.randint(0, 2) for _ in range(rng.randint(0, 2))),))
        target = Config(rng.choice(model.states), (tuple(rng.randint(0, 2) for _ in range(rng.randint(0, 3))),))
        try:
            verdict = verifier.cover(start, [target])
        except SearchBudgetExceededError:
            continue
        found = enumerate_reachable(model, start, Semantics.INTERNAL_SUPERSEDING, 5_000, 6)
        forward = any(config_leq(target, c) for c in found.configs)
        if verdict.holds:
            run = verdict.certificate.run
            replay_run(model, run, Semantics.INTERNAL_SUPERSEDING)
            assert run.start == start and config_leq(target, run.final)
        else:
            assert not forward
            basis = verdict.certificate.basis
            assert pairwise_incomparable(basis)
            assert not any(config_leq(b, start) for b in basis)
            assert any(config_leq(b, target) for b in basis)
        if forward:
            assert verdict.holds
        elif not found.truncated:
            assert not verdict.holds


def test_terminate_agrees_with_forward_search():
    """Test termination on random systems against cycles in the complete reachability graph."""
    rng = random.Random(9)
    decided = 0
    for _ in range(80):
        model = random_pcs(rng, size=rng.randint(2, 4))
        start = Config(rng.choice(model.states), (tuple(rng.randint(0, 2) for _ in range(rng.randint(0, 3))),))
        try:
            verdict = WstsVerifier(model, max_configs=20_000).terminate(start)
        except SearchBudgetExceededError:
            continue
        if not verdict.holds:
            certificate = verdict.certificate
            assert certificate.kind == CertificateKind.DOMINATION
            replay_run(model, certificate.run, Semantics.INTERNAL_SUPERSEDING)
            i, j = certificate.indices
            configs = certificate.run.configs()
            assert i < j and config_leq(configs[i], configs[j])
        found = enumerate_reachable(model, start, Semantics.INTERNAL_SUPERSEDING, 5_000, 6)
        if not found.truncated:
            decided += 1
            assert verdict.holds == (not has_cycle(found.edges))
    assert decided > 0


def test_normalize_sampled_runs():
    """Test normalization of random internal-superseding runs from empty channels."""
    for model in (example_pcs(), small_pcs()):
        start = Config.empty(model.states[0], 1)
        for seed in range(50):
            run = run_simulate(model, start, Semantics.INTERNAL_SUPERSEDING, 15, seed)
            normalized = normalize_run(model, run)
            replay_run(model, normalized, Semantics.WRITE_SUPERSEDING)
            assert normalized.start == run.start
            assert normalized.final == run.final
            assert not any(label.is_internal for label, _ in normalized.steps)
            assert len(normalized) == sum(1 for label, _ in run.steps if not label.is_internal)
