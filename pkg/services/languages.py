"""
Regular Languages
Letter and action languages for the gadget builder, held as automata-lib
NFAs and compiled to minimal DFAs. Letters travel through the automata as
single characters so that regular expressions can be handed to
`NFA.from_regex`; `letter_value` turns them back into integers.
"""

import logging
import string
from typing import Callable, Dict, Hashable, Iterable, List, Sequence, Set

from automata.base.exceptions import InvalidRegexError
from automata.fa.dfa import DFA
from automata.fa.nfa import NFA

from services.exceptions import ParseError

logger = logging.getLogger(__name__)

LETTER_CHARS = string.digits + string.ascii_lowercase


def letter_symbol(letter: int) -> str:
    if not 0 <= letter < len(LETTER_CHARS):
        raise ValueError(f"letter {letter} has no regular-expression symbol")
    return LETTER_CHARS[letter]


def letter_value(symbol: str) -> int:
    return LETTER_CHARS.index(symbol)


# Combinators

def symbol(sym: Hashable) -> NFA:
    return NFA(
        states={0, 1},
        input_symbols={sym},
        transitions={0: {sym: {1}}, 1: {}},
        initial_state=0,
        final_states={1},
    )


def epsilon() -> NFA:
    return NFA(states={0}, input_symbols=set(), transitions={0: {}}, initial_state=0, final_states={0})


def nothing() -> NFA:
    return NFA(states={0}, input_symbols=set(), transitions={0: {}}, initial_state=0, final_states=set())


def concat(*parts: NFA) -> NFA:
    if not parts:
        return epsilon()
    result = parts[0]
    for part in parts[1:]:
        result = result.concatenate(part)
    return result


def union(*parts: NFA) -> NFA:
    if not parts:
        return nothing()
    result = parts[0]
    for part in parts[1:]:
        result = result.union(part)
    return result


def star(part: NFA) -> NFA:
    return part.kleene_star()


def plus(part: NFA) -> NFA:
    return concat(part, star(part))


def optional(part: NFA) -> NFA:
    return part.option()


def word(symbols: Iterable[Hashable]) -> NFA:
    return concat(*[symbol(s) for s in symbols])


def any_of(symbols: Iterable[Hashable]) -> NFA:
    return union(*[symbol(s) for s in symbols])


def letters(values: Iterable[int]) -> NFA:
    return any_of(letter_symbol(a) for a in values)


def substitute(letter_nfa: NFA, images: Callable[[int], Sequence[Hashable]]) -> NFA:
    """Replace every letter edge by a chain spelling the action word `images(letter)`."""
    states: Set[Hashable] = {("q", s) for s in letter_nfa.states}
    transitions: Dict[Hashable, Dict[Hashable, Set[Hashable]]] = {state: {} for state in states}
    alphabet: Set[Hashable] = set()
    fresh = 0

    def add(src: Hashable, sym: Hashable, dst: Hashable) -> None:
        transitions[src].setdefault(sym, set()).add(dst)

    for src, row in letter_nfa.transitions.items():
        for sym, targets in row.items():
            for dst in targets:
                if sym == "":
                    add(("q", src), "", ("q", dst))
                    continue
                image = list(images(letter_value(sym)))
                alphabet.update(image)
                current = ("q", src)
                for action in image[:-1]:
                    nxt = ("via", fresh)
                    fresh += 1
                    states.add(nxt)
                    transitions[nxt] = {}
                    add(current, action, nxt)
                    current = nxt
                if image:
                    add(current, image[-1], ("q", dst))
                else:
                    add(current, "", ("q", dst))
    return NFA(
        states=states,
        input_symbols=alphabet,
        transitions=transitions,
        initial_state=("q", letter_nfa.initial_state),
        final_states={("q", s) for s in letter_nfa.final_states},
    )


def compile_nfa(nfa: NFA) -> DFA:
    """Minimal complete DFA of the language."""
    return DFA.from_nfa(nfa).minify(retain_names=False)


def dead_states(dfa: DFA) -> Set[Hashable]:
    """States of a minimal DFA whose language is empty: the rejecting sink, if any."""
    return {
        state for state in dfa.states
        if state not in dfa.final_states and all(dst == state for dst in dfa.transitions.get(state, {}).values())
    }


# Letter regular expressions

def _translate_regex(text: str, marker: int) -> str:
    """
    Rewrite the letter syntax into automata-lib regex syntax: `$` is the
    marker, `.` any letter up to the marker, `[...]` a class of digits and
    `<12>` a letter above 9.
    """
    out: List[str] = []
    pos = 0

    def checked(value: int) -> str:
        if value > marker:
            raise ParseError(f"letter {value} exceeds marker {marker}", pos)
        return letter_symbol(value)

    def group(values: Iterable[int]) -> str:
        return "(" + "|".join(checked(v) for v in values) + ")"

    while pos < len(text):
        ch = text[pos]
        if ch == "$":
            out.append(checked(marker))
        elif ch.isdigit():
            out.append(checked(int(ch)))
        elif ch == ".":
            out.append(group(range(marker + 1)))
        elif ch == "[":
            end = text.find("]", pos)
            if end < 0 or end == pos + 1:
                raise ParseError("malformed letter class", pos)
            body = text[pos + 1:end]
            if not body.isdigit():
                raise ParseError("letter classes hold digits only", pos)
            out.append(group(int(c) for c in body))
            pos = end
        elif ch == "<":
            end = text.find(">", pos)
            if end < 0 or not text[pos + 1:end].isdigit():
                raise ParseError("malformed letter", pos)
            out.append(checked(int(text[pos + 1:end])))
            pos = end
        elif ch in "|*+?()":
            out.append(ch)
        else:
            raise ParseError(f"unexpected '{ch}' in regular expression", pos)
        pos += 1
    return "".join(out)


def parse_letter_regex(text: str, marker: int) -> NFA:
    """
    Letter language of a regular expression over 0..marker. Besides the
    automata-lib operators `|`, `*`, `+`, `?` and parentheses, the text may
    use `$`, `.`, `[...]` and `<n>`.
    """
    text = "".join(text.split())
    if not text:
        raise ParseError("empty regular expression")
    regex = _translate_regex(text, marker)
    try:
        return NFA.from_regex(regex, input_symbols={letter_symbol(a) for a in range(marker + 1)})
    except InvalidRegexError as e:
        raise ParseError(f"invalid regular expression '{text}': {e}") from e
