"""Finger B-tree sliding-window aggregation with native bulk operations."""
from .evict import BoundaryTriple, search_boundary
from .insert import sort_and_combine, split_sizes
from .monoid import MONOIDS, Bloom, Concat, GeoMean, Max, Monoid, Sum, SumOverflowError, get_monoid
from .node import AggKind, Node
from .oracle import ListModel, OracleWindow
from .pool import NodePool
from .tree import Counters, Tree, Violation


def new_tree(monoid: Monoid, min_arity: int = 4, debug: bool = False) -> Tree:
    return Tree(monoid, min_arity=min_arity, debug=debug)


__all__ = [
    "AggKind", "Bloom", "BoundaryTriple", "Concat", "Counters", "GeoMean", "ListModel", "MONOIDS",
    "Max", "Monoid", "Node", "NodePool", "OracleWindow", "Sum", "SumOverflowError", "Tree",
    "Violation", "get_monoid", "new_tree", "search_boundary", "sort_and_combine", "split_sizes",
]
