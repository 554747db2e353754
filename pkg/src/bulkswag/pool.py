"""Deferred free list for tree nodes.

Evicting a bulk of m entries can orphan O(m) nodes. Releasing them eagerly
would cost O(m), so eviction only pushes the roots of dead subtrees here and
each later allocation pays for one node: pop it, push its children, reuse it.
"""
from __future__ import annotations

from .node import Node


class NodePool:
    def __init__(self, debug: bool = False):
        self._free: list[Node] = []
        self.debug = debug
        self._members: set[int] = set()
        # lifetime counters
        self.fresh = 0
        self.reused = 0
        self.released = 0
        self.pushes = 0
        self.pops = 0

    def __len__(self) -> int:
        return len(self._free)

    def defer_free(self, node: Node) -> None:
        """Park a dead subtree root; its descendants are not touched."""
        if self.debug:
            key = id(node)
            if key in self._members:
                raise AssertionError(f"double free of node {key:#x}")
            self._members.add(key)
        node.parent = None
        self._free.append(node)
        self.pushes += 1

    def _pop(self) -> Node:
        node = self._free.pop()
        self.pops += 1
        if self.debug:
            self._members.discard(id(node))
        for child in node.children:
            self.defer_free(child)
        node.reset()
        return node

    def alloc(self) -> Node:
        """Return a blank node; worst case one pop plus MAX_ARITY pushes."""
        if self._free:
            self.reused += 1
            return self._pop()
        self.fresh += 1
        return Node()

    def drain(self) -> None:
        """Release every parked node (and, transitively, their subtrees)."""
        while self._free:
            self._pop()
            self.released += 1

    def reachable(self) -> int:
        """Number of nodes held by the free list, counting whole subtrees."""
        total = 0
        stack = list(self._free)
        while stack:
            node = stack.pop()
            total += 1
            stack.extend(node.children)
        return total
