from __future__ import annotations

import random
from typing import Callable, Optional, Union

from hypothesis import HealthCheck, settings

from bulkswag import Concat, OracleWindow, Tree
from bulkswag.node import Node

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# shape: a leaf is a list of times; an internal node is (times, [child shapes])
Shape = Union[list, tuple]


def build_tree(monoid, mu: int, shape: Shape, value: Optional[Callable] = None) -> Tree:
    """Assemble a tree with the given shape and derive flags and aggregates."""
    value = value or (lambda t: str(t).encode() + b"," if monoid is Concat else t)
    tree = Tree(monoid, mu)

    def make(s, parent):
        node = tree.pool.alloc()
        node.parent = parent
        times = s[0] if isinstance(s, tuple) else s
        node.times = list(times)
        node.values = [value(t) for t in times]
        if isinstance(s, tuple):
            node.children = [make(c, node) for c in s[1]]
        return node

    root = make(shape, None)
    tree.root = root
    n = root
    while True:
        n.left_spine = True
        if not n.children:
            break
        n = n.children[0]
    tree.left_finger = n
    n = root
    while True:
        n.right_spine = True
        if not n.children:
            break
        n = n.children[-1]
    tree.right_finger = n

    def up(node):
        for c in node.children:
            up(c)
        if node.parent is not None and not node.left_spine and not node.right_spine:
            tree._recompute_up(node)

    up(root)
    tree._recompute_inner(root)
    if root.children:
        tree.repair_left_spine(root.children[0])
        tree.repair_right_spine(root.children[-1])
    return tree


def shape_of(node: Node):
    if not node.children:
        return list(node.times)
    return (list(node.times), [shape_of(c) for c in node.children])


def random_op(rng: random.Random, oracle: OracleWindow, max_m: int = 256, value=None):
    """One randomized bulk op against the oracle's current state."""
    value = value or (lambda: bytes([97 + rng.randrange(26)]))
    times = oracle.times
    n = len(times)
    if rng.random() < 0.5 or n == 0:
        m = rng.randint(1, max_m)
        d = rng.randint(0, n)
        young = times[-1] if n else 0
        lo = (times[n - d] - rng.randint(1, 3)) if d else young + 1
        hi = max(young, lo) + 3 * m
        ts = sorted(rng.sample(range(lo, hi + 1), min(m, hi - lo + 1)))
        return "insert", [(t, value()) for t in ts]
    r = rng.random()
    if r < 0.1:
        return "evict", times[0] - rng.randint(1, 5)
    if r < 0.15:
        return "evict", times[-1] + rng.randint(0, 5)
    k = min(n - 1, rng.randint(0, 300))
    return "evict", times[k] + rng.choice((0, 0, -1, 1))


def apply(target, op):
    kind, arg = op
    if kind == "insert":
        target.bulk_insert(arg)
    else:
        target.bulk_evict(arg)
