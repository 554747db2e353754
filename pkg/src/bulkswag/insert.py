"""Bulk insertion of a strictly increasing run of (timestamp, value) pairs.

Step 1 locates every insertion site with finger search. Each later search only
climbs as far as the lowest node whose range still covers the timestamp. The
resulting treelets are then processed level by level. Overfull nodes are
rewritten through a lazy merge of old entries and new ones and cut into parts
of arity mu+1 plus a final part of arity mu..2mu. The separators move up as
the next level's treelets. A final pass down repairs the spine aggregates.
"""
from __future__ import annotations

from bisect import bisect_left
from typing import Any, Iterable, Iterator, Optional

from .node import Node


class Treelet:
    """Consolidated event record for one target node.

    ``items`` holds (timestamp, value, child) insertions in timestamp order;
    ``recompute`` marks a pending aggregate recomputation with no payload.
    """

    __slots__ = ("target", "level", "key", "items", "recompute")

    def __init__(self, target: Node, level: int, key: Any, items: list, recompute: bool):
        self.target = target
        self.level = level
        self.key = key
        self.items = items
        self.recompute = recompute

    def __repr__(self) -> str:
        kind = "recompute" if not self.items else f"{len(self.items)} insertions"
        return f"Treelet(L{self.level}, key={self.key}, {kind}, target={self.target!r})"


def _emit(buf: list, target: Node, level: int, key: Any, items: Optional[list], recompute: bool) -> None:
    if buf:
        last = buf[-1]
        if last.target is target:
            if items:
                last.items.extend(items)
            last.recompute = last.recompute or recompute
            return
    buf.append(Treelet(target, level, key, list(items) if items else [], recompute))


def sort_and_combine(raw: Iterable[tuple[Any, Any]], monoid) -> list[tuple[Any, Any]]:
    """Stable sort by timestamp; equal timestamps combine in input order."""
    out: list[tuple[Any, Any]] = []
    comb = monoid.combine
    for t, v in sorted(raw, key=lambda p: p[0]):
        if out and out[-1][0] == t:
            out[-1] = (t, comb(out[-1][1], v))
        else:
            out.append((t, v))
    return out


def search_insertion_sites(tree, bulk: list[tuple[Any, Any]], out: list) -> None:
    """Fill ``out`` with leaf-level treelets in timestamp order.

    Collisions combine into the existing slot right away and leave a
    recomputation record that rides along from the leaf level.
    """
    ctr = tree.counters
    comb = tree._combine
    t1 = bulk[0][0]
    # climb from the right finger while t1 is left of the node's range
    y = tree.right_finger
    level = 0
    visits = 1
    while y.parent is not None and t1 <= y.parent.times[-1]:
        y = y.parent
        level += 1
        visits += 1
    # stack of (node, exclusive upper bound or None, level)
    stack: list[tuple[Node, Any, int]] = [(y, None, level)]
    seen = 1
    for t, v in bulk:
        node, upper, lvl = stack[-1]
        while upper is not None and t >= upper:
            stack.pop()
            node, upper, lvl = stack[-1]
        while True:
            times = node.times
            i = bisect_left(times, t)
            if i < len(times) and times[i] == t:
                node.values[i] = comb(node.values[i], v)
                ctr.combines += 1
                _emit(out, node, lvl, t, None, True)
                break
            if not node.children:
                _emit(out, node, 0, t, [(t, v, None)], False)
                break
            if i < len(times):
                upper = times[i]
            node = node.children[i]
            lvl -= 1
            stack.append((node, upper, lvl))
            visits += 1
            seen += 1
    ctr.nodes_visited += visits
    ctr.search_visits += visits
    ctr.search_unique += seen


def interleave(times: list, values: list, children: list, items: list) -> Iterator[tuple[Any, Any, Optional[Node]]]:
    """Merge a node's old slots with new items, yielding (t, v, right child)."""
    inner = bool(children)
    n = len(times)
    i = 0
    for item in items:
        t = item[0]
        while i < n and times[i] < t:
            yield times[i], values[i], children[i + 1] if inner else None
            i += 1
        yield item
    while i < n:
        yield times[i], values[i], children[i + 1] if inner else None
        i += 1


def split_sizes(p: int, mu: int) -> list[int]:
    """Arity decomposition of an overfull node: all parts mu+1 except the last.

    With k = p // (mu+1) and r = p % (mu+1): if r == mu the last part is mu,
    otherwise one mu+1 part absorbs the remainder into a last part mu+1+r.
    """
    if p <= 2 * mu:
        raise ValueError(f"arity {p} does not overflow max arity {2 * mu}")
    k, r = divmod(p, mu + 1)
    if r == mu:
        return [mu + 1] * k + [mu]
    return [mu + 1] * (k - 1) + [mu + 1 + r]


def bulk_split(tree, node: Node, stream: Iterator, p: int) -> tuple[list[Node], list[tuple[Any, Any, Node]]]:
    """Write ``stream`` into parts; ``node`` becomes the first part.

    Returns the parts and the separators, each separator carrying the part to
    its right.
    """
    sizes = split_sizes(p, tree.min_arity)
    leaf = not node.children
    old_first = None if leaf else node.children[0]
    node.times = []
    node.values = []
    node.children = [] if leaf else [old_first]
    alloc = tree.pool.alloc
    parts = [node]
    seps: list[tuple[Any, Any, Node]] = []
    cur = node
    for idx, b in enumerate(sizes):
        if idx:
            t, v, c = next(stream)
            cur = alloc()
            seps.append((t, v, cur))
            parts.append(cur)
            if not leaf:
                cur.children.append(c)
                c.parent = cur
        ts, vs, cs = cur.times, cur.values, cur.children
        for _ in range(b - 1):
            t, v, c = next(stream)
            ts.append(t)
            vs.append(v)
            if not leaf:
                cs.append(c)
                c.parent = cur
    tree.counters.splits += 1
    tree.counters.nodes_visited += len(parts)
    return parts, seps


def _small_insert(node: Node, items: list) -> None:
    times, values, ch = node.times, node.values, node.children
    for t, v, c in items:
        i = bisect_left(times, t)
        times.insert(i, t)
        values.insert(i, v)
        if c is not None:
            ch.insert(i + 1, c)
            c.parent = node


class _Marks:
    __slots__ = ("left", "right")

    def __init__(self) -> None:
        self.left: Optional[Node] = None
        self.right: Optional[Node] = None


def grow_root(tree, old_root: Node) -> Node:
    """Put an empty root above ``old_root``; separators arrive as treelets."""
    root = tree.pool.alloc()
    root.children.append(old_root)
    old_root.parent = root
    root.left_spine = root.right_spine = True
    tree.root = root
    return root


def _process(tree, target: Node, level: int, key: Any, items: list, out: list, marks: _Marks) -> None:
    tree.counters.nodes_visited += 1
    if items:
        p = len(target.times) + 1 + len(items)
        if p > tree.max_arity:
            _split_target(tree, target, level, items, p, out, marks)
            return
        _small_insert(target, items)
    if target.parent is None:
        tree._recompute_inner(target)
    elif target.left_spine:
        marks.left = target
    elif target.right_spine:
        marks.right = target
    else:
        tree._recompute_up(target)
        _emit(out, target.parent, level + 1, key, None, True)


def _split_target(tree, target: Node, level: int, items: list, p: int, out: list, marks: _Marks) -> None:
    stream = interleave(target.times, target.values, target.children, items)
    parts, seps = bulk_split(tree, target, stream, p)
    if target.parent is None:
        grow_root(tree, target)
    parent = target.parent
    for part in parts[1:]:
        part.parent = parent
    if target.right_spine:
        target.right_spine = False
        last = parts[-1]
        last.right_spine = True
        marks.right = last
    if target.left_spine:
        marks.left = target
    for part in parts:
        if not part.left_spine and not part.right_spine:
            tree._recompute_up(part)
    _emit(out, parent, level + 1, seps[0][0], seps, False)


def level_step(tree, inbuf: list, level: int, out: list, marks: _Marks) -> None:
    """Consume the treelets for ``level``; write the next level's into ``out``."""
    i = 0
    n = len(inbuf)
    while i < n:
        rec = inbuf[i]
        if rec.level > level:
            _emit(out, rec.target, rec.level, rec.key, rec.items, rec.recompute)
            i += 1
            continue
        target = rec.target
        items = rec.items
        j = i + 1
        while j < n and inbuf[j].target is target:
            if inbuf[j].items:
                items = items + inbuf[j].items
            j += 1
        i = j
        _process(tree, target, level, rec.key, items, out, marks)


def _check_sorted(buf: list, level: int) -> None:
    for a, b in zip(buf, buf[1:]):
        assert a.key <= b.key, f"treelets out of order after level {level}: {a!r} then {b!r}"
    for rec in buf:
        assert rec.level > level, f"stale treelet {rec!r} after level {level}"


def bulk_insert(tree, bulk: Iterable[tuple[Any, Any]]) -> None:
    """Insert a strictly increasing bulk; colliding timestamps combine."""
    bulk = list(bulk)
    if not bulk:
        return
    for a, b in zip(bulk, bulk[1:]):
        if not a[0] < b[0]:
            raise ValueError(f"bulk timestamps must be strictly increasing: {a[0]!r} then {b[0]!r}")
    buf_a, buf_b = tree._bufs
    buf_a.clear()
    buf_b.clear()
    search_insertion_sites(tree, bulk, buf_a)
    marks = _Marks()
    level = 0
    while buf_a:
        level_step(tree, buf_a, level, buf_b, marks)
        if tree.debug:
            _check_sorted(buf_b, level)
        buf_a.clear()
        buf_a, buf_b = buf_b, buf_a
        level += 1
    if marks.left is not None:
        tree.repair_left_spine(marks.left)
    if marks.right is not None:
        tree.repair_right_spine(marks.right)
    root = tree.root
    if not root.children:
        tree.left_finger = tree.right_finger = root
