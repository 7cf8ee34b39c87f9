"""
Finite ordered trees of bounded depth, optionally labeled.
"""

from dataclasses import dataclass
from typing import Any, Optional, Tuple


@dataclass(frozen=True)
class BoundedTree:
    children: Tuple["BoundedTree", ...] = ()
    label: Optional[Any] = None

    @property
    def depth(self) -> int:
        """Leaves have depth 0."""
        if not self.children:
            return 0
        return 1 + max(child.depth for child in self.children)

    @property
    def size(self) -> int:
        return 1 + sum(child.size for child in self.children)


LEAF = BoundedTree()


def node(*children: BoundedTree, label: Optional[Any] = None) -> BoundedTree:
    return BoundedTree(tuple(children), label)
