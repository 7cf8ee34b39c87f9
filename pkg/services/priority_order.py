"""
Priority Ordering
The priority embedding on words over {0, ..., d}, superseding rewrites,
canonical factorizations, labeled generalizations and closure automata.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple, Union

from automata.fa.dfa import DFA
from automata.fa.nfa import NFA

from models.words import CanonicalFactorization, ClosureKind, LabeledLetter, LabeledWord, Word, height
from services.exceptions import HeightMismatchError, MalformedWordError

logger = logging.getLogger(__name__)


def validate_word(word: Sequence[int], level: Optional[int] = None) -> Word:
    """Return the word as a tuple, rejecting negative letters and letters above `level`."""
    for letter in word:
        if not isinstance(letter, int) or letter < 0 or (level is not None and letter > level):
            raise MalformedWordError(f"letter {letter!r} outside alphabet 0..{level}")
    return tuple(word)


def supersede_successors(x: Word) -> Set[Word]:
    """All words obtained by dropping one letter that is followed by a letter at least as high."""
    return {x[:k] + x[k + 1:] for k in range(len(x) - 1) if x[k] <= x[k + 1]}


def strict_supersede_successors(x: Word) -> Set[Word]:
    return {x[:k] + x[k + 1:] for k in range(len(x) - 1) if x[k] < x[k + 1]}


def supersede_positions(x: Word, strict: bool = False) -> List[int]:
    """1-based positions k at which x can be superseded."""
    if strict:
        return [k + 1 for k in range(len(x) - 1) if x[k] < x[k + 1]]
    return [k + 1 for k in range(len(x) - 1) if x[k] <= x[k + 1]]


def _reach_table(x: Word, y: Word) -> List[Set[int]]:
    # reach[j] holds every i such that x[:i] is matched by y[:j] with the
    # pending gap compatible with x[i]
    n = len(x)
    reach: List[Set[int]] = [set() for _ in range(len(y) + 1)]
    reach[0].add(0)
    for j, b in enumerate(y):
        nxt = reach[j + 1]
        for i in reach[j]:
            if i < n:
                if b <= x[i]:
                    nxt.add(i)
                if b == x[i]:
                    nxt.add(i + 1)
    return reach


def pleq(x: Word, y: Word) -> bool:
    """Priority embedding: y = z_1 a_1 ... z_l a_l with x = a_1 ... a_l and z_i over {0..a_i}."""
    return len(x) in _reach_table(x, y)[len(y)]


def _matched_positions(x: Word, y: Word) -> Optional[List[int]]:
    reach = _reach_table(x, y)
    i = len(x)
    if i not in reach[len(y)]:
        return None
    matched: List[int] = []
    for j in range(len(y), 0, -1):
        b = y[j - 1]
        if i > 0 and x[i - 1] == b and (i - 1) in reach[j - 1]:
            matched.append(j - 1)
            i -= 1
        # otherwise y[j-1] was skipped and i is unchanged
    matched.reverse()
    return matched


def pleq_witness(x: Word, y: Word) -> Optional[List[Word]]:
    """The gaps z_1, ..., z_l of an embedding of x into y, or None."""
    matched = _matched_positions(x, y)
    if matched is None:
        return None
    gaps: List[Word] = []
    previous = -1
    for position in matched:
        gaps.append(y[previous + 1:position])
        previous = position
    return gaps


def supersede_path(x: Word, y: Word) -> Optional[List[int]]:
    """
    Superseding positions (1-based, applied in order) rewriting y into x,
    or None when x is not below y.
    """
    matched = _matched_positions(x, y)
    if matched is None:
        return None
    kept = set(matched)
    return [index + 1 for index in range(len(y) - 1, -1, -1) if index not in kept]


def split_witness(x1: Word, x2: Word, y: Word) -> Optional[Tuple[Word, Word]]:
    """A split y = y1 y2 with x1 below y1 and x2 below y2."""
    for cut in range(len(y) + 1):
        if pleq(x1, y[:cut]) and pleq(x2, y[cut:]):
            return y[:cut], y[cut:]
    return None


def canonical_factorize(x: Word) -> CanonicalFactorization:
    h = height(x)
    if h < 0:
        return CanonicalFactorization(h, ((),))
    residuals: List[Word] = []
    current: List[int] = []
    for letter in x:
        if letter == h:
            residuals.append(tuple(current))
            current = []
        else:
            current.append(letter)
    residuals.append(tuple(current))
    return CanonicalFactorization(h, tuple(residuals))


def residual_embedding_check(x: Word, y: Word) -> bool:
    """
    Sufficient condition for x below y on words of equal height: the first and
    last residuals embed in place and the inner residuals of x embed, in order,
    into inner residuals of y.
    """
    fx, fy = canonical_factorize(x), canonical_factorize(y)
    if fx.height != fy.height:
        raise HeightMismatchError(f"heights differ: {fx.height} vs {fy.height}")
    k, m = fx.occurrences, fy.occurrences
    if k == 0:
        return m == 0 and pleq(fx.residuals[0], fy.residuals[0])
    if m < k:
        return False
    if not pleq(fx.residuals[0], fy.residuals[0]) or not pleq(fx.residuals[k], fy.residuals[m]):
        return False
    j = 1
    for i in range(1, k):
        while j < m and not pleq(fx.residuals[i], fy.residuals[j]):
            j += 1
        if j >= m:
            return False
        j += 1
    return True


class LabelOrder:
    """A well-quasi-order on labels of one priority stratum."""

    def contains(self, label: Any) -> bool:
        return True

    def leq(self, v: Any, w: Any) -> bool:
        raise NotImplementedError

    def labels_below(self, w: Any) -> Iterable[Any]:
        """Every label v with v <= w (finite for the built-in orders)."""
        raise NotImplementedError


class EqualityOrder(LabelOrder):
    """Equality on an (optionally declared) finite set of labels."""

    def __init__(self, labels: Optional[Iterable[Hashable]] = None):
        self.labels = None if labels is None else frozenset(labels)

    def contains(self, label: Any) -> bool:
        return self.labels is None or label in self.labels

    def leq(self, v: Any, w: Any) -> bool:
        return v == w

    def labels_below(self, w: Any) -> Iterable[Any]:
        return [w]


class FiniteOrderTable(LabelOrder):
    """Reflexive-transitive closure of the given `(smaller, larger)` pairs."""

    def __init__(self, labels: Iterable[Hashable], pairs: Iterable[Tuple[Hashable, Hashable]]):
        self.labels = frozenset(labels)
        below: Dict[Hashable, Set[Hashable]] = {label: {label} for label in self.labels}
        for low, high in pairs:
            if low not in self.labels or high not in self.labels:
                raise MalformedWordError(f"pair ({low!r}, {high!r}) uses undeclared labels")
            below[high].add(low)
        changed = True
        while changed:
            changed = False
            for label in self.labels:
                closure = set().union(*(below[v] for v in below[label]))
                if closure != below[label]:
                    below[label] = closure
                    changed = True
        self._below = {label: frozenset(vs) for label, vs in below.items()}

    def contains(self, label: Any) -> bool:
        return label in self.labels

    def leq(self, v: Any, w: Any) -> bool:
        return v in self._below[w]

    def labels_below(self, w: Any) -> Iterable[Any]:
        return sorted(self._below[w], key=repr)


class SubwordOrder(LabelOrder):
    """Subword (scattered subsequence) embedding on strings."""

    def __init__(self, alphabet: Optional[Iterable[str]] = None):
        self.alphabet = None if alphabet is None else frozenset(alphabet)

    def contains(self, label: Any) -> bool:
        if not isinstance(label, str):
            return False
        return self.alphabet is None or set(label) <= self.alphabet

    def leq(self, v: str, w: str) -> bool:
        remaining = iter(w)
        return all(ch in remaining for ch in v)

    def labels_below(self, w: str) -> Iterable[str]:
        subwords = {
            "".join(w[i] for i in chosen)
            for size in range(len(w) + 1)
            for chosen in combinations(range(len(w)), size)
        }
        return sorted(subwords, key=lambda s: (len(s), s))


class StratifiedLabelOrder:
    """One label order per priority, with an optional fallback for unlisted strata."""

    def __init__(self, strata: Optional[Dict[int, LabelOrder]] = None, default: Optional[LabelOrder] = None):
        self.strata = dict(strata or {})
        self.default = default

    @classmethod
    def uniform(cls, order: LabelOrder) -> "StratifiedLabelOrder":
        return cls(default=order)

    def order_for(self, priority: int) -> LabelOrder:
        order = self.strata.get(priority, self.default)
        if order is None:
            raise MalformedWordError(f"no label order for priority {priority}")
        return order


OrderSpec = Union[LabelOrder, StratifiedLabelOrder]


def _stratified(order: OrderSpec) -> StratifiedLabelOrder:
    if isinstance(order, StratifiedLabelOrder):
        return order
    return StratifiedLabelOrder.uniform(order)


def _check_labels(word: LabeledWord, order: StratifiedLabelOrder) -> None:
    for letter in word:
        if letter.priority < 0 or not order.order_for(letter.priority).contains(letter.label):
            raise MalformedWordError(f"label {letter.label!r} does not belong to stratum {letter.priority}")


def gen_pleq(x: LabeledWord, y: LabeledWord, order: OrderSpec) -> bool:
    """Labeled priority embedding: gaps by priority, matched letters by the stratum's label order."""
    strata = _stratified(order)
    x = tuple(LabeledLetter(*letter) for letter in x)
    y = tuple(LabeledLetter(*letter) for letter in y)
    _check_labels(x, strata)
    _check_labels(y, strata)
    n = len(x)
    current: Set[int] = {0}
    for b in y:
        nxt: Set[int] = set()
        for i in current:
            if i >= n:
                continue
            a = x[i]
            if b.priority <= a.priority:
                nxt.add(i)
            if b.priority == a.priority and strata.order_for(a.priority).leq(a.label, b.label):
                nxt.add(i + 1)
        current = nxt
        if not current:
            return False
    return n in current


def gen_supersede_successors(x: LabeledWord, order: OrderSpec) -> Set[LabeledWord]:
    """One generalized superseding step: drop a letter before an equal-or-higher one, or lower a label."""
    strata = _stratified(order)
    x = tuple(LabeledLetter(*letter) for letter in x)
    _check_labels(x, strata)
    result: Set[LabeledWord] = set()
    for k in range(len(x) - 1):
        if x[k].priority <= x[k + 1].priority:
            result.add(x[:k] + x[k + 1:])
    for k, letter in enumerate(x):
        for lower in strata.order_for(letter.priority).labels_below(letter.label):
            if lower != letter.label:
                result.add(x[:k] + (LabeledLetter(letter.priority, lower),) + x[k + 1:])
    return result


@dataclass(frozen=True)
class ClosureAutomaton:
    """Minimal DFA for the upward or downward closure of a word."""
    kind: ClosureKind
    word: Word
    level: int
    dfa: DFA

    def accepts(self, y: Word) -> bool:
        return self.dfa.accepts_input(tuple(y))

    @property
    def num_states(self) -> int:
        """State count of the complete minimal automaton (sink included when needed)."""
        complete = all(
            len(self.dfa.transitions.get(state, {})) == len(self.dfa.input_symbols) for state in self.dfa.states
        )
        return len(self.dfa.states) + (0 if complete else 1)


def _upward_transitions(x: Word, level: int) -> Dict[int, Dict[int, Set[int]]]:
    """Position i guesses where y's next letter sits relative to x[i]: skipped below it or matched."""
    transitions: Dict[int, Dict[int, Set[int]]] = {i: {} for i in range(len(x) + 1)}
    for i, a in enumerate(x):
        for b in range(level + 1):
            targets = ({i} if b <= a else set()) | ({i + 1} if b == a else set())
            if targets:
                transitions[i][b] = targets
    return transitions


def _downward_transitions(x: Word, level: int) -> Dict[int, Dict[int, Set[int]]]:
    """Position j may match letter b at any later position p unless a letter above b sits in between."""
    transitions: Dict[int, Dict[int, Set[int]]] = {j: {} for j in range(len(x) + 1)}
    for j in range(len(x)):
        for b in range(level + 1):
            targets = set()
            for p in range(j, len(x)):
                if x[p] == b:
                    targets.add(p + 1)
                if x[p] > b:
                    break
            if targets:
                transitions[j][b] = targets
    return transitions


def closure_automaton(x: Word, kind: ClosureKind, level: int) -> ClosureAutomaton:
    """
    UP recognizes {y : x below y}; DOWN recognizes {w : w below x}.
    Built as an NFA over prefix positions, then determinized and minimized.
    """
    x = validate_word(x, level)
    kind = ClosureKind(kind)
    build = _upward_transitions if kind == ClosureKind.UP else _downward_transitions
    nfa = NFA(
        states=set(range(len(x) + 1)),
        input_symbols=set(range(level + 1)),
        transitions=build(x, level),
        initial_state=0,
        final_states={len(x)},
    )
    dfa = DFA.from_nfa(nfa).minify(retain_names=False)
    logger.debug(f"closure automaton {kind.value} for {x}: {len(dfa.states)} states")
    return ClosureAutomaton(kind, x, level, dfa)
