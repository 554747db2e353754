"""Augmented finger B-tree for sliding-window aggregation.

Every node stores one of four partial aggregates depending on where it sits:

* non-spine, non-root nodes: the *up* aggregate of their whole subtree;
* the root: the *inner* aggregate, i.e. its values and all children except the
  leftmost and rightmost;
* left-spine nodes: their values and children except the leftmost, combined
  with the parent's left aggregate;
* right-spine nodes: the mirror image.

With that layout ``query()`` touches only the two fingers and the root.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Any, Iterable, Iterator, Optional

from .monoid import Monoid
from .node import AggKind, Node
from .pool import NodePool


@dataclass
class Counters:
    """Per-operation instrumentation; reset by the caller."""

    nodes_visited: int = 0
    combines: int = 0
    search_visits: int = 0
    search_unique: int = 0
    evict_levels: int = 0
    boundary_len: int = 0
    repair_levels: int = 0
    moves: int = 0
    merges: int = 0
    splits: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def snapshot(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Violation:
    category: str
    detail: str

    def __str__(self) -> str:
        return f"{self.category}: {self.detail}"


class Tree:
    def __init__(self, monoid: Monoid, min_arity: int = 4, debug: bool = False):
        if min_arity < 2:
            raise ValueError(f"min_arity must be >= 2, got {min_arity}")
        self.monoid = monoid
        self.min_arity = min_arity
        self.max_arity = 2 * min_arity
        self.debug = debug
        self.pool = NodePool(debug=debug)
        self.counters = Counters()
        self._combine = monoid.combine
        self._identity = monoid.identity
        root = self.pool.alloc()
        root.left_spine = root.right_spine = True
        root.agg = monoid.identity
        self.root = root
        self.left_finger = root
        self.right_finger = root
        # alternating treelet buffers for bulk insertion
        self._bufs: tuple[list, list] = ([], [])

    # ------------------------------------------------------------------ query

    def query(self) -> Any:
        root = self.root
        self.counters.nodes_visited += 1
        if not root.children:
            return root.agg
        self.counters.nodes_visited += 2
        self.counters.combines += 2
        c = self._combine
        return c(c(self.left_finger.agg, root.agg), self.right_finger.agg)

    def size(self) -> int:
        root = self.root
        if not root.children:
            return len(root.times)
        return self.left_finger.cnt + root.cnt + self.right_finger.cnt

    __len__ = size

    def oldest_time(self) -> Optional[Any]:
        times = self.left_finger.times
        return times[0] if times else None

    def youngest_time(self) -> Optional[Any]:
        times = self.right_finger.times
        return times[-1] if times else None

    def height(self) -> int:
        h = 0
        node = self.root
        while node.children:
            node = node.children[0]
            h += 1
        return h

    def items(self) -> Iterator[tuple[Any, Any]]:
        """In-order (timestamp, value) pairs."""
        stack: list[tuple[Node, int]] = [(self.root, 0)]
        while stack:
            node, i = stack.pop()
            if not node.children:
                yield from zip(node.times, node.values)
                continue
            if i == len(node.children):
                continue
            if i > 0:
                yield node.times[i - 1], node.values[i - 1]
            stack.append((node, i + 1))
            stack.append((node.children[i], 0))

    def dump(self) -> str:
        return "".join(f"{t} {v!r}\n" for t, v in self.items())

    # ------------------------------------------------------------- mutation

    def bulk_evict(self, t: Any) -> int:
        from .evict import bulk_evict

        return bulk_evict(self, t)

    def bulk_insert(self, bulk: Iterable[tuple[Any, Any]]) -> None:
        from .insert import bulk_insert

        bulk_insert(self, bulk)

    def insert(self, t: Any, v: Any) -> None:
        self.bulk_insert(((t, v),))

    def evict(self) -> None:
        oldest = self.oldest_time()
        if oldest is not None:
            self.bulk_evict(oldest)

    # ---------------------------------------------------- aggregate repairs

    def agg_kind(self, node: Node) -> AggKind:
        return node.kind()

    def recompute_agg(self, node: Node) -> None:
        """Recompute ``node.agg``/``node.cnt`` for the node's current kind."""
        if node.parent is None:
            self._recompute_inner(node)
        elif node.left_spine:
            self._recompute_left(node)
        elif node.right_spine:
            self._recompute_right(node)
        else:
            self._recompute_up(node)

    def _recompute_up(self, node: Node) -> None:
        comb = self._combine
        vals = node.values
        ch = node.children
        ctr = self.counters
        if ch:
            c = ch[0]
            agg = c.agg
            cnt = c.cnt + len(vals)
            for i, v in enumerate(vals):
                c = ch[i + 1]
                agg = comb(comb(agg, v), c.agg)
                cnt += c.cnt
            ctr.combines += 2 * len(vals)
        elif vals:
            agg = vals[0]
            for v in vals[1:]:
                agg = comb(agg, v)
            cnt = len(vals)
            ctr.combines += len(vals) - 1
        else:
            agg, cnt = self._identity, 0
        node.agg = agg
        node.cnt = cnt
        ctr.nodes_visited += 1

    def _inner(self, node: Node) -> tuple[Any, int]:
        comb = self._combine
        vals = node.values
        if not vals:
            return self._identity, 0
        ch = node.children
        agg = vals[0]
        cnt = len(vals)
        if ch:
            for i in range(1, len(vals)):
                c = ch[i]
                agg = comb(comb(agg, c.agg), vals[i])
                cnt += c.cnt
            self.counters.combines += 2 * (len(vals) - 1)
        else:
            for v in vals[1:]:
                agg = comb(agg, v)
            self.counters.combines += len(vals) - 1
        return agg, cnt

    def _recompute_inner(self, node: Node) -> None:
        node.agg, node.cnt = self._inner(node)
        self.counters.nodes_visited += 1

    def _recompute_left(self, node: Node) -> None:
        comb = self._combine
        agg, cnt = self._inner(node)
        ch = node.children
        if ch:
            last = ch[-1]
            agg = comb(agg, last.agg)
            cnt += last.cnt
        parent = node.parent
        if parent.parent is not None:
            agg = comb(agg, parent.agg)
            cnt += parent.cnt
        node.agg = agg
        node.cnt = cnt
        self.counters.combines += 2
        self.counters.nodes_visited += 1

    def _recompute_right(self, node: Node) -> None:
        comb = self._combine
        agg, cnt = self._inner(node)
        ch = node.children
        if ch:
            first = ch[0]
            agg = comb(first.agg, agg)
            cnt += first.cnt
        parent = node.parent
        if parent.parent is not None:
            agg = comb(parent.agg, agg)
            cnt += parent.cnt
        node.agg = agg
        node.cnt = cnt
        self.counters.combines += 2
        self.counters.nodes_visited += 1

    def repair_left_spine(self, start: Node) -> None:
        """Top-down left-aggregate and flag repair from ``start`` to the leaf."""
        node = start
        if node.parent is None:
            if not node.children:
                self.left_finger = node
                return
            node = node.children[0]
        while True:
            node.left_spine = True
            self._recompute_left(node)
            if not node.children:
                self.left_finger = node
                return
            node = node.children[0]

    def repair_right_spine(self, start: Node) -> None:
        node = start
        if node.parent is None:
            if not node.children:
                self.right_finger = node
                return
            node = node.children[-1]
        while True:
            node.right_spine = True
            self._recompute_right(node)
            if not node.children:
                self.right_finger = node
                return
            node = node.children[-1]

    # ------------------------------------------------------------ validation

    def live_nodes(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(node.children)
        return count

    def validate(self) -> list[Violation]:
        """Recheck every structural and aggregate invariant from scratch."""
        out: list[Violation] = []
        bad = out.append
        mu, mx = self.min_arity, self.max_arity
        fold = self.monoid.fold
        ident = self.monoid.identity
        root = self.root
        if root.parent is not None:
            bad(Violation("root", "root has a parent"))

        # pass 1: preorder walk for structure, order, height
        order: list[Node] = []
        leaf_depths: set[int] = set()
        stack: list[tuple[Node, Any, Any, int]] = [(root, None, None, 0)]
        while stack:
            node, lo, hi, depth = stack.pop()
            order.append(node)
            times, vals, ch = node.times, node.values, node.children
            if len(times) != len(vals):
                bad(Violation("shape", f"{node!r}: {len(times)} times vs {len(vals)} values"))
            for a, b in zip(times, times[1:]):
                if not a < b:
                    bad(Violation("order", f"{node!r}: times not strictly increasing"))
                    break
            if times:
                if lo is not None and not times[0] > lo:
                    bad(Violation("order", f"{node!r}: {times[0]} not above separator {lo}"))
                if hi is not None and not times[-1] < hi:
                    bad(Violation("order", f"{node!r}: {times[-1]} not below separator {hi}"))
            arity = len(times) + 1
            if node is root:
                if ch and not 2 <= arity <= mx:
                    bad(Violation("arity", f"root {node!r} arity {arity} outside [2, {mx}]"))
                if not ch and arity > mx:
                    bad(Violation("arity", f"leaf root {node!r} arity {arity} above {mx}"))
            elif not mu <= arity <= mx:
                bad(Violation("arity", f"{node!r} arity {arity} outside [{mu}, {mx}]"))
            if ch:
                if len(ch) != arity:
                    bad(Violation("shape", f"{node!r}: {len(ch)} children for arity {arity}"))
                bounds = [lo, *times, hi]
                for i, c in enumerate(ch):
                    if c.parent is not node:
                        bad(Violation("parent", f"child {c!r} of {node!r} has wrong parent link"))
                    stack.append((c, bounds[i] if i < len(bounds) else None,
                                  bounds[i + 1] if i + 1 < len(bounds) else None, depth + 1))
            else:
                leaf_depths.add(depth)
        if len(leaf_depths) > 1:
            bad(Violation("height", f"leaves at depths {sorted(leaf_depths)}"))

        # spines and fingers
        left_path, right_path = [root], [root]
        while left_path[-1].children:
            left_path.append(left_path[-1].children[0])
        while right_path[-1].children:
            right_path.append(right_path[-1].children[-1])
        lids = {id(n) for n in left_path}
        rids = {id(n) for n in right_path}
        for node in order:
            if node.left_spine != (id(node) in lids):
                bad(Violation("spine", f"{node!r} left_spine flag is {node.left_spine}"))
            if node.right_spine != (id(node) in rids):
                bad(Violation("spine", f"{node!r} right_spine flag is {node.right_spine}"))
        if self.left_finger is not left_path[-1]:
            bad(Violation("finger", "left finger is not the leftmost leaf"))
        if self.right_finger is not right_path[-1]:
            bad(Violation("finger", "right finger is not the rightmost leaf"))

        # aggregates: full-subtree values from scratch, bottom-up
        up: dict[int, tuple[Any, int]] = {}
        for node in reversed(order):
            ch = node.children
            if ch:
                seq = [up[id(ch[0])][0]]
                cnt = up[id(ch[0])][1]
                for i, v in enumerate(node.values):
                    seq.append(v)
                    seq.append(up[id(ch[i + 1])][0])
                    cnt += 1 + up[id(ch[i + 1])][1]
                up[id(node)] = (fold(seq), cnt)
            else:
                up[id(node)] = (fold(node.values), len(node.values))

        def inner(node: Node) -> tuple[Any, int]:
            seq, cnt = [], len(node.values)
            for i, v in enumerate(node.values):
                if i > 0 and node.children:
                    seq.append(up[id(node.children[i])][0])
                    cnt += up[id(node.children[i])][1]
                seq.append(v)
            return fold(seq), cnt

        expected: dict[int, tuple[Any, int]] = {}
        for node in order:  # preorder: parents before children
            if node is root:
                exp = inner(node)
            elif node.left_spine and id(node) in lids:
                ia, ic = inner(node)
                seq, cnt = [ia], ic
                if node.children:
                    seq.append(up[id(node.children[-1])][0])
                    cnt += up[id(node.children[-1])][1]
                if node.parent is not root:
                    pa, pc = expected[id(node.parent)]
                    seq.append(pa)
                    cnt += pc
                exp = (fold(seq), cnt)
            elif node.right_spine and id(node) in rids:
                ia, ic = inner(node)
                seq, cnt = [], ic
                if node.parent is not root:
                    pa, pc = expected[id(node.parent)]
                    seq.append(pa)
                    cnt += pc
                if node.children:
                    seq.append(up[id(node.children[0])][0])
                    cnt += up[id(node.children[0])][1]
                seq.append(ia)
                exp = (fold(seq), cnt)
            else:
                exp = up[id(node)]
            expected[id(node)] = exp
            if node.agg != exp[0]:
                bad(Violation("aggregate", f"{node!r} ({node.kind().value}) stores {node.agg!r}, expected {exp[0]!r}"))
            if node.cnt != exp[1]:
                bad(Violation("count", f"{node!r} ({node.kind().value}) stores count {node.cnt}, expected {exp[1]}"))

        total = up[id(root)][1]
        if self.size() != total:
            bad(Violation("count", f"size() is {self.size()} but tree holds {total} entries"))
        if total == 0 and root.agg != ident:
            bad(Violation("aggregate", "empty tree aggregate is not the identity"))
        return out
