from __future__ import annotations

import enum
from typing import Any, Optional


class AggKind(enum.Enum):
    UP = "up"
    INNER = "inner"
    LEFT = "left"
    RIGHT = "right"


class Node:
    """One B-tree node: parallel times/values, child links, parent link.

    ``agg`` and ``cnt`` hold the node's location-sensitive partial aggregate
    and the matching entry count (same formula, with + as the combine).
    """

    __slots__ = ("times", "values", "children", "parent", "left_spine", "right_spine", "agg", "cnt")

    def __init__(self) -> None:
        self.times: list[Any] = []
        self.values: list[Any] = []
        self.children: list[Node] = []
        self.parent: Optional[Node] = None
        self.left_spine = False
        self.right_spine = False
        self.agg: Any = None
        self.cnt = 0

    def reset(self) -> None:
        self.times.clear()
        self.values.clear()
        self.children.clear()
        self.parent = None
        self.left_spine = False
        self.right_spine = False
        self.agg = None
        self.cnt = 0

    @property
    def arity(self) -> int:
        return len(self.times) + 1

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def is_root(self) -> bool:
        return self.parent is None

    def kind(self) -> AggKind:
        if self.parent is None:
            return AggKind.INNER
        if self.left_spine:
            return AggKind.LEFT
        if self.right_spine:
            return AggKind.RIGHT
        return AggKind.UP

    def __repr__(self) -> str:
        flags = ("L" if self.left_spine else "") + ("R" if self.right_spine else "")
        return f"Node({self.times!r}{', ' + flags if flags else ''})"
