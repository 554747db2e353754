"""Bulk eviction: remove every entry with timestamp <= t in O(log m) amortized.

Three phases. The boundary search walks up from the left finger and back down,
recording one (node, ancestor, neighbor) triple per level. The pass up evicts
locally at each level and fixes underflow by moving a batch from the neighbor
or merging into it; a short repair loop continues above the boundary while
parents keep underflowing. The pass down rebuilds spine aggregates and flags.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Any, NamedTuple, Optional

from .node import Node


class BoundaryTriple(NamedTuple):
    node: Node
    ancestor: Optional[Node]
    neighbor: Optional[Node]


def search_boundary(tree, t: Any) -> list[BoundaryTriple]:
    """Boundary triples ordered leaf-upward.

    The caller guarantees ``oldest <= t < youngest``. The first entry of the
    result is the lowest level (a leaf, or the node holding an exact match).
    """
    ctr = tree.counters
    y = tree.left_finger
    visits = 1
    while y.parent is not None and y.times[-1] <= t:
        y = y.parent
        visits += 1
    if y.parent is None:
        anc = nb = None
    else:
        anc = y.parent
        nb = anc.children[1]
        visits += 1
    path = [BoundaryTriple(y, anc, nb)]
    node = y
    while True:
        times = node.times
        i = bisect_right(times, t)
        if i and times[i - 1] == t:
            break
        ch = node.children
        if not ch:
            break
        child = ch[i]
        if i + 1 < len(ch):
            nb = ch[i + 1]
            anc = node
        elif nb is not None:
            nb = nb.children[0]
        else:
            anc = None
        path.append(BoundaryTriple(child, anc, nb))
        node = child
        visits += 1 if nb is None else 2
    path.reverse()
    ctr.boundary_len += len(path)
    ctr.nodes_visited += visits
    ctr.search_visits += visits
    return path


def local_evict(tree, node: Node, t: Any) -> int:
    """Drop the prefix of entries <= t and the children left of them."""
    i = bisect_right(node.times, t)
    if i == 0:
        return 0
    del node.times[:i]
    del node.values[:i]
    ch = node.children
    if ch:
        dead = ch[:i]
        del ch[:i]
        free = tree.pool.defer_free
        for c in dead:
            free(c)
    return i


def _separator_index(anc: Node, nb: Node) -> int:
    # index of e_a: the greatest ancestor entry below the neighbor's contents
    return bisect_left(anc.times, nb.times[0]) - 1


def move_batch(tree, node: Node, nb: Node, anc: Node, k: int) -> None:
    """Rotate e_a and the first k-1 neighbor entries into node."""
    a = _separator_index(anc, nb)
    node.times.append(anc.times[a])
    node.values.append(anc.values[a])
    node.times.extend(nb.times[: k - 1])
    node.values.extend(nb.values[: k - 1])
    anc.times[a] = nb.times[k - 1]
    anc.values[a] = nb.values[k - 1]
    del nb.times[:k]
    del nb.values[:k]
    if nb.children:
        moved = nb.children[:k]
        del nb.children[:k]
        for c in moved:
            c.parent = node
        node.children.extend(moved)
    tree.counters.moves += 1


def merge_not_sibling(tree, node: Node, nb: Node, anc: Node) -> None:
    """Push node's remains and e_a onto the front of nb; free node's branch."""
    a = _separator_index(anc, nb)
    node.times.append(anc.times[a])
    node.values.append(anc.values[a])
    nb.times[:0] = node.times
    nb.values[:0] = node.values
    if node.children:
        for c in node.children:
            c.parent = nb
        nb.children[:0] = node.children
    node.times.clear()
    node.values.clear()
    node.children.clear()
    dead = anc.children[: a + 1]
    del anc.times[: a + 1]
    del anc.values[: a + 1]
    del anc.children[: a + 1]
    free = tree.pool.defer_free
    for c in dead:
        free(c)
    tree.counters.merges += 1


def shrink_root(tree, node: Node) -> Node:
    """Make ``node`` (or its single child) the root; returns the new root."""
    new = node
    if node.children and len(node.children) == 1:
        new = node.children[0]
    old = tree.root
    if new is not old:
        # new is always the last child of its parent
        new.parent.children.pop()
        new.parent = None
        tree.pool.defer_free(old)
        tree.root = new
    new.left_spine = new.right_spine = True
    return new


class _PassState:
    __slots__ = ("top", "right_top")

    def __init__(self) -> None:
        self.top: Optional[Node] = None
        self.right_top: Optional[Node] = None


def _rebalance(tree, node: Node, nb: Node, anc: Node, state: _PassState) -> bool:
    """Fix underflow in node using nb; True when node was merged away."""
    mu = tree.min_arity
    deficit = mu - len(node.times) - 1
    surplus = len(nb.times) + 1 - mu
    tree.counters.nodes_visited += 1
    if deficit <= surplus:
        move_batch(tree, node, nb, anc, deficit)
        merged = False
    else:
        merge_not_sibling(tree, node, nb, anc)
        merged = True
    if tree.debug:
        arity = len(nb.times) + 1
        assert mu <= arity <= tree.max_arity, f"neighbor arity {arity} after rebalance"
        assert merged == (deficit > surplus)
    return merged


def _refresh_neighbor(tree, nb: Node, state: _PassState) -> None:
    if nb.right_spine:
        state.right_top = nb
    else:
        tree._recompute_up(nb)


def pass_up(tree, boundary: list[BoundaryTriple], t: Any) -> _PassState:
    state = _PassState()
    mu = tree.min_arity
    ctr = tree.counters
    skip_to: Optional[Node] = None
    prev_nb: Optional[Node] = None
    prev_dirty = False
    last_rebalanced = False
    for node, anc, nb in boundary:
        if skip_to is not None:
            if node is not skip_to:
                continue
            skip_to = None
        ctr.evict_levels += 1
        ctr.nodes_visited += 1
        local_evict(tree, node, t)
        if nb is None:
            # right spine reached: everything above node is evicted
            old_root = tree.root
            new_root = shrink_root(tree, node)
            if new_root is not old_root:
                state.right_top = new_root
            tree._recompute_inner(new_root)
            state.top = new_root
            return state
        dirty = prev_dirty and prev_nb.parent is nb
        last_rebalanced = False
        if len(node.times) + 1 < mu:
            last_rebalanced = True
            if _rebalance(tree, node, nb, anc, state):
                skip_to = anc
                # nb and its ancestors below anc now form the left spine
                prev_dirty = False
                prev_nb = None
                continue
            dirty = True
        if dirty:
            _refresh_neighbor(tree, nb, state)
        prev_dirty = dirty
        prev_nb = nb

    # boundary top is a non-root left-spine node B with parent p
    b_node, p, _ = boundary[-1]
    if skip_to is not None:
        b_node = None  # merged away
    if not last_rebalanced:
        state.top = b_node
        return state
    y = p
    while True:
        ctr.evict_levels += 1
        ctr.repair_levels += 1
        ctr.nodes_visited += 1
        if y.parent is None:
            if len(y.children) == 1:
                y = shrink_root(tree, y.children[0])
                state.right_top = y
            tree._recompute_inner(y)
            state.top = y
            return state
        if len(y.times) + 1 >= mu:
            state.top = y
            return state
        parent = y.parent
        sib = parent.children[1]
        merged = _rebalance(tree, y, sib, parent, state)
        if not merged:
            _refresh_neighbor(tree, sib, state)
        y = parent


def pass_down(tree, state: _PassState) -> None:
    if state.top is not None:
        tree.repair_left_spine(state.top)
    if state.right_top is not None:
        tree.repair_right_spine(state.right_top)
    root = tree.root
    if not root.children:
        tree.left_finger = tree.right_finger = root


def _reset(tree) -> None:
    # keep the root object, park its children: at most MAX_ARITY pushes
    root = tree.root
    for c in root.children:
        tree.pool.defer_free(c)
    root.times = []
    root.values = []
    root.children = []
    root.left_spine = root.right_spine = True
    root.agg = tree.monoid.identity
    root.cnt = 0
    tree.left_finger = tree.right_finger = root


def bulk_evict(tree, t: Any) -> int:
    """Remove all entries with timestamp <= t; returns how many went."""
    lf = tree.left_finger
    if not lf.times or t < lf.times[0]:
        return 0
    before = tree.size()
    if t >= tree.right_finger.times[-1]:
        _reset(tree)
        tree.counters.nodes_visited += 1
        return before
    boundary = search_boundary(tree, t)
    state = pass_up(tree, boundary, t)
    pass_down(tree, state)
    return before - tree.size()
