"""
Ordinal Term Parser
Reads and prints the textual ordinal syntax: `0`, `1`, `w`, `w^a`, `a+b`,
`a*k` and `e0`.
"""

import logging
import re
from typing import List, Optional

from models.ordinal_terms import EPSILON0, OMEGA, ONE, OrdinalTerm, from_int, omega_power
from services.exceptions import ParseError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(\d+)|(e0)|(w)|([+*^()]))")


class TermParser:
    """Recursive-descent parser for ordinal terms"""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[tuple] = []
        self.positions: List[int] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                raise ParseError(f"unexpected character '{text[pos:].strip()[0]}'", pos)
            number, eps, omega, punct = match.groups()
            if number is not None:
                self.tokens.append(("int", int(number)))
            elif eps is not None:
                self.tokens.append(("e0", None))
            elif omega is not None:
                self.tokens.append(("w", None))
            else:
                self.tokens.append((punct, None))
            self.positions.append(match.start(0))
            pos = match.end(0)
        self.index = 0

    def parse(self) -> OrdinalTerm:
        if not self.tokens:
            raise ParseError("empty ordinal term")
        if self.tokens == [("e0", None)]:
            return EPSILON0
        term = self._sum()
        if self.index != len(self.tokens):
            raise ParseError(f"unexpected '{self._peek()}'", self._position())
        return term

    def _peek(self) -> Optional[str]:
        return self.tokens[self.index][0] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        return self.positions[self.index] if self.index < len(self.positions) else len(self.text)

    def _expect(self, kind: str):
        if self._peek() != kind:
            raise ParseError(f"expected '{kind}'", self._position())
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _sum(self) -> OrdinalTerm:
        term = self._product()
        while self._peek() == "+":
            self.index += 1
            term = term + self._product()
        return term

    def _product(self) -> OrdinalTerm:
        term = self._power()
        while self._peek() == "*":
            self.index += 1
            _, count = self._expect("int")
            term = OrdinalTerm(term.exponents * count)
        return term

    def _power(self) -> OrdinalTerm:
        if self._peek() == "w":
            self.index += 1
            if self._peek() == "^":
                self.index += 1
                return omega_power(self._power())
            return OMEGA
        return self._atom()

    def _atom(self) -> OrdinalTerm:
        kind = self._peek()
        if kind == "int":
            _, value = self._expect("int")
            return from_int(value)
        if kind == "(":
            self.index += 1
            term = self._sum()
            self._expect(")")
            return term
        if kind == "e0":
            raise ParseError("e0 may only appear on its own", self._position())
        raise ParseError(f"unexpected '{kind}'", self._position())


def parse_term(text: str) -> OrdinalTerm:
    return TermParser(text).parse()


def _exponent_text(exponent: OrdinalTerm) -> str:
    if all(e.is_zero for e in exponent.exponents):
        return str(len(exponent.exponents))
    if exponent == OMEGA:
        return "w"
    return f"({format_term(exponent)})"


def format_term(term: OrdinalTerm) -> str:
    """Inverse of parse_term up to grouping of equal neighbouring summands."""
    if term.epsilon0:
        return "e0"
    if term.is_zero:
        return "0"
    parts: List[str] = []
    i = 0
    exponents = term.exponents
    while i < len(exponents):
        j = i
        while j < len(exponents) and exponents[j] == exponents[i]:
            j += 1
        count, exponent = j - i, exponents[i]
        if exponent.is_zero:
            parts.append(str(count))
        else:
            base = "w" if exponent == ONE else f"w^{_exponent_text(exponent)}"
            parts.append(base if count == 1 else f"{base}*{count}")
        i = j
    return "+".join(parts)
