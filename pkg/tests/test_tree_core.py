import random

import pytest

from bulkswag import AggKind, Concat, Max, OracleWindow, Sum, Tree, new_tree
from conftest import build_tree


def test_new_tree_empty():
    tree = new_tree(Sum, 4)
    assert tree.query() == 0
    assert tree.size() == 0
    assert tree.oldest_time() is None and tree.youngest_time() is None
    assert tree.root is tree.left_finger is tree.right_finger
    assert tree.validate() == []


def test_min_arity_two_gives_max_four():
    assert Tree(Sum, 2).max_arity == 4


@pytest.mark.parametrize("mu", [1, 0, -3])
def test_min_arity_rejected(mu):
    with pytest.raises(ValueError):
        Tree(Sum, mu)


def test_query_max_example():
    tree = Tree(Max, 2)
    tree.bulk_insert([(1, 4), (2, 2), (3, 5)])
    assert tree.query() == 5


def test_agg_kinds():
    tree = Tree(Sum, 2)
    tree.bulk_insert([(t, t) for t in range(60)])
    assert tree.height() >= 2
    assert tree.agg_kind(tree.root) is AggKind.INNER
    assert tree.agg_kind(tree.left_finger) is AggKind.LEFT
    assert tree.agg_kind(tree.right_finger) is AggKind.RIGHT
    middle = tree.root.children[0].children[1]
    assert tree.agg_kind(middle) is AggKind.UP


def test_recompute_formulas_on_small_tree():
    # mu = 2, values a..t in time order; a..f feed the left finger, g..o the root
    shape = ([7, 15], [
        ([3], [[1, 2], [4, 5, 6]]),
        ([10, 12], [[8, 9], [11], [13, 14]]),
        ([18], [[16, 17], [19, 20]]),
    ])
    tree = build_tree(Concat, 2, shape, value=lambda t: bytes([96 + t]))
    assert tree.validate() == []
    leaf = tree.left_finger
    assert leaf.agg == b"ab" + b"c" + b"def"  # own values, then parent's left aggregate
    root = tree.root
    assert root.agg == b"g" + b"hijklmn" + b"o"
    up_node = root.children[1].children[1]
    assert up_node.agg == b"k"
    assert tree.query() == bytes(range(97, 97 + 20))


def test_size_and_time_accessors():
    tree = Tree(Sum, 2)
    for t in (5, 3, 9):
        tree.insert(t, 1)
    assert (tree.oldest_time(), tree.youngest_time(), tree.size()) == (3, 9, 3)
    tree.bulk_evict(5)
    assert tree.oldest_time() == 9 and tree.size() == 1


def test_insert_collision_combines():
    tree = Tree(Concat, 2)
    tree.insert(7, b"a")
    tree.insert(7, b"b")
    assert list(tree.items()) == [(7, b"ab")]


def test_evict_on_empty_is_noop():
    tree = Tree(Sum, 2)
    tree.evict()
    assert tree.size() == 0 and tree.validate() == []


@pytest.mark.parametrize("mu", [2, 3, 4])
def test_random_single_inserts_then_evicts(mu):
    rng = random.Random(mu)
    tree, oracle = Tree(Concat, mu), OracleWindow(Concat)
    for _ in range(1000):
        t, v = rng.randrange(5000), bytes([97 + rng.randrange(26)])
        tree.insert(t, v)
        oracle.insert(t, v)
    assert tree.validate() == []
    assert tree.query() == oracle.query()
    while tree.size():
        tree.evict()
        oracle.evict()
        assert tree.query() == oracle.query()
    assert tree.validate() == []
    assert oracle.items() == []


def test_validator_clean_after_many_single_inserts():
    rng = random.Random(1)
    tree = Tree(Concat, 4)
    oracle = OracleWindow(Concat)
    for _ in range(10_000):
        t = rng.randrange(10**6)
        tree.insert(t, b"x")
        oracle.insert(t, b"x")
    assert tree.validate() == []
    assert tree.query() == oracle.query()


def test_validator_flags_corrupted_aggregate():
    tree = Tree(Sum, 2)
    tree.bulk_insert([(t, t) for t in range(100)])
    victim = tree.root.children[1]
    victim.agg += 1
    found = tree.validate()
    assert [v.category for v in found] == ["aggregate"]


def test_validator_flags_arity_break():
    tree = Tree(Sum, 2)
    tree.bulk_insert([(t, t) for t in range(100)])
    leaf = tree.root.children[1]
    while leaf.children:
        leaf = leaf.children[1]
    del leaf.times[:]
    del leaf.values[:]
    cats = {v.category for v in tree.validate()}
    assert "arity" in cats


def test_validator_flags_spine_and_order():
    tree = Tree(Sum, 2)
    tree.bulk_insert([(t, t) for t in range(50)])
    tree.root.children[1].left_spine = True
    tree.right_finger.times[-1] = -5
    cats = {v.category for v in tree.validate()}
    assert {"spine", "order"} <= cats


@pytest.mark.parametrize("n", [1, 2**8, 2**12])
def test_query_touches_constant_nodes(n):
    tree = Tree(Sum, 4)
    tree.bulk_insert([(t, 1) for t in range(n)])
    tree.counters.reset()
    assert tree.query() == n
    assert tree.counters.nodes_visited <= 3
    assert tree.counters.combines <= max(2, tree.max_arity - 2)


def test_items_and_dump_in_order():
    tree = Tree(Sum, 2)
    ts = random.Random(3).sample(range(1000), 300)
    for t in ts:
        tree.insert(t, t)
    assert [t for t, _ in tree.items()] == sorted(ts)
    assert tree.dump().splitlines()[0] == f"{min(ts)} {min(ts)}"
