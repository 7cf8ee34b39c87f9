"""
Tests for the lossy channel translations and the strict reliable simulation.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from models.channel_system import Config, Semantics
from services.exceptions import TranslationError
from services.lcs_translation import (
    Flavor,
    LcsModel,
    build_strict_reliable_sim,
    empty_lcs_config,
    encode_lcs_config,
    encode_message,
    lcs_reachable,
    translate_lcs,
)
from services.pcs_semantics import enumerate_reachable


def w(text):
    return tuple(int(ch) for ch in text)


def lcs(rules, messages=("a", "b"), **extra):
    data = {"messages": list(messages), "channels": ["c"], "states": ["p", "q", "r", "s"], "rules": rules}
    data.update(extra)
    return LcsModel.model_validate(data)


def reachable(model, start, sem, max_len=6):
    return enumerate_reachable(model, start, sem, 20_000, max_len).configs


def test_encode_message():
    """Test the three message encodings."""
    three = lcs([], messages=("a", "b", "c"))
    assert encode_message(three, Flavor.PLAIN, "c") == w("102")
    assert encode_message(three, Flavor.PLAIN, "a") == w("002")
    assert encode_message(three, Flavor.WEAK, "c") == w("001")
    assert encode_message(three, Flavor.DLCS, "b") == w("13")


def test_weak_write():
    """Test that writing the second message of a weak system writes 0 then 1."""
    source = lcs([{"from": "p", "channel": "c", "op": "!", "message": "b", "to": "q"}])
    model = translate_lcs(source, Flavor.WEAK)
    assert model.level == 1
    assert sorted((rule.op.value, rule.letter) for rule in model.rules) == [("!", 0), ("!", 1)]
    assert len(model.states) == 5


def test_weak_degradation_by_superseding():
    """Test that a superseded weak message reads as a lower one."""
    source = lcs([{"from": "p", "channel": "c", "op": "!", "message": "b", "to": "q"}])
    model = translate_lcs(source, Flavor.WEAK)
    found = reachable(model, Config.empty("p", 1), Semantics.WRITE_SUPERSEDING)
    assert encode_lcs_config(source, Flavor.WEAK, ("q", (("b",),), ())) in found
    assert encode_lcs_config(source, Flavor.WEAK, ("q", (("a",),), ())) in found

    degraded = lcs_reachable(source, ("q", (("b",),), ()), weak=True)
    assert ("q", (("a",),), ()) in degraded
    assert ("q", ((),), ()) in degraded


def test_plain_write_then_read():
    """Test a write followed by the matching read."""
    source = lcs([
        {"from": "p", "channel": "c", "op": "!", "message": "b", "to": "q"},
        {"from": "q", "channel": "c", "op": "?", "message": "b", "to": "r"},
    ])
    model = translate_lcs(source, Flavor.PLAIN)
    found = reachable(model, Config.empty("p", 1), Semantics.RELIABLE)
    assert Config("q", (w("12"),)) in found
    assert Config.empty("r", 1) in found
    assert ("r", ((),), ()) in lcs_reachable(source, empty_lcs_config(source, "p"))


def test_plain_read_skips_leftover_separators():
    """Test that separators left by superseding are skipped before a read."""
    source = lcs([{"from": "q", "channel": "c", "op": "?", "message": "a", "to": "r"}])
    model = translate_lcs(source, Flavor.PLAIN)
    assert Config.empty("r", 1) in reachable(model, Config("q", (w("2202"),)), Semantics.RELIABLE)


def test_dlcs_send_and_get():
    """Test copying a channel into the second-order channel and back on reliable channels."""
    source = lcs(
        [
            {"from": "p", "channel": "c", "op": "!", "message": "a", "to": "q"},
            {"from": "q", "channel": "c", "op": "send", "to": "r"},
            {"from": "r", "channel": "c", "op": "?", "message": "a", "to": "s"},
            {"from": "s", "channel": "c", "op": "get", "to": "p"},
        ],
        messages=("a",),
        second_order="d",
    )
    model = translate_lcs(source, Flavor.DLCS)
    assert model.channels == ["c", "d"]
    assert model.level == 2

    found = reachable(model, Config.empty("p", 2), Semantics.RELIABLE)
    assert Config("r", (w("01"), w("012"))) in found
    assert Config("s", ((), w("012"))) in found
    assert Config("p", (w("01"), ())) in found
    assert encode_lcs_config(source, Flavor.DLCS, ("p", (("a",),), ())) == Config("p", (w("01"), ()))
    assert ("p", (("a",),), ()) in lcs_reachable(source, empty_lcs_config(source, "p"))


def test_strict_reliable_simulation():
    """Test the strict simulation and the blocking separators."""
    source = lcs(
        [
            {"from": "p", "channel": "c", "op": "!", "message": "a", "to": "q"},
            {"from": "q", "channel": "c", "op": "?", "message": "a", "to": "r"},
        ],
        lossy=False,
    )
    model = build_strict_reliable_sim(source)
    assert model.level == 2
    assert Config.empty("r", 1) in reachable(model, Config.empty("p", 1), Semantics.STRICT)
    for blocked in ("22", "212"):
        found = reachable(model, Config("q", (w(blocked),)), Semantics.STRICT)
        assert all(config.state == "q" for config in found)


def test_empty_system():
    """Test a system without rules."""
    source = LcsModel.model_validate({"messages": ["a"], "channels": ["c"], "states": ["p"]})
    model = translate_lcs(source, Flavor.PLAIN)
    assert model.states == ["p"]
    assert model.rules == []


def test_translation_errors():
    """Test rejected sources."""
    reliable = lcs([{"from": "p", "channel": "c", "op": "!", "message": "a", "to": "q"}], lossy=False)
    with pytest.raises(TranslationError):
        translate_lcs(reliable, Flavor.PLAIN)

    second_order = lcs([{"from": "p", "channel": "c", "op": "send", "to": "q"}], second_order="d")
    with pytest.raises(TranslationError):
        translate_lcs(second_order, Flavor.PLAIN)
    with pytest.raises(TranslationError):
        build_strict_reliable_sim(second_order)

    with pytest.raises(ValueError):
        lcs([{"from": "p", "channel": "c", "op": "!", "message": "z", "to": "q"}])
    with pytest.raises(ValueError):
        lcs([{"from": "p", "channel": "c", "op": "get", "to": "q"}])
    with pytest.raises(ValueError):
        lcs([], second_order="c")
