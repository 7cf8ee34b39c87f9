"""
Tree Codes
Bounded-depth trees as priority words, and strong tree embedding.
"""

import logging
from typing import Optional

from models.trees import LEAF, BoundedTree
from models.words import LabeledLetter, LabeledWord, Word
from services.exceptions import DepthOverflowError, ImproperCodeError
from services.ordinal_codes import is_proper
from services.priority_order import LabelOrder, canonical_factorize

logger = logging.getLogger(__name__)


def tree_encode(t: BoundedTree, d: int) -> Word:
    """A leaf is empty; a node lists each child's code one level lower, followed by d."""
    if not t.children:
        return ()
    if d < 0:
        raise DepthOverflowError(f"tree of depth {t.depth} does not fit")
    result: Word = ()
    for child in t.children:
        result += tree_encode(child, d - 1) + (d,)
    return result


def tree_decode(x: Word) -> BoundedTree:
    """
    Inverse of tree_encode on proper codes.

    Raises:
        ImproperCodeError: x is not a proper code
    """
    if not is_proper(x):
        raise ImproperCodeError(f"{x} is not a proper code")
    return _decode(x)


def _decode(x: Word) -> BoundedTree:
    if not x:
        return LEAF
    residuals = canonical_factorize(x).residuals[:-1]
    return BoundedTree(tuple(_decode(r) for r in residuals))


def tree_extend(t: BoundedTree, u: BoundedTree) -> BoundedTree:
    """Append u as the last child of the root of t."""
    return BoundedTree(t.children + (u,), t.label)


def labeled_tree_encode(t: BoundedTree, d: int) -> LabeledWord:
    """A leaf labeled f is (d, f); a node repeats (d, f) after each child's code."""
    if d < 0:
        raise DepthOverflowError(f"tree of depth {t.depth} does not fit")
    mark = LabeledLetter(d, t.label)
    if not t.children:
        return (mark,)
    result: LabeledWord = ()
    for child in t.children:
        result += labeled_tree_encode(child, d - 1) + (mark,)
    return result


def strong_embed(t: BoundedTree, u: BoundedTree, order: Optional[LabelOrder] = None) -> bool:
    """
    t is obtained from u by deleting whole subtrees (and, with an order,
    lowering labels): roots correspond and children embed in order.
    """
    if order is None:
        if t.label != u.label:
            return False
    elif not order.leq(t.label, u.label):
        return False
    j = 0
    for child in t.children:
        while j < len(u.children) and not strong_embed(child, u.children[j], order):
            j += 1
        if j == len(u.children):
            return False
        j += 1
    return True
