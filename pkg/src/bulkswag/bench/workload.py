"""Synthetic (n, m, d) workloads with per-operation timing."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from ..monoid import get_monoid
from ..tree import Tree
from .stats import LatencyRecord, StatsSummary, summarize

MODES = ("evict", "insert", "both", "single")

# the d youngest entries sit far above the dense body of timestamps, so a bulk
# of fresh body timestamps always lands exactly d entries from the young end
FUTURE_BASE = 1 << 62

PRESETS = {
    "desk": {"window_size": 1 << 20},
    "stress": {"window_size": 1 << 27},
}


@dataclass
class WorkloadSpec:
    window_size: int = 1 << 20
    bulk_size: int = 1024
    ooo_distance: int = 0
    agg: str = "sum"
    mode: str = "evict"
    min_arity: int = 4
    iters: int = 1000
    seed: int = 0
    emulate_loop: bool = False

    def check(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.bulk_size < 1:
            raise ValueError("bulk size must be >= 1")
        if not 0 <= self.ooo_distance <= self.window_size:
            raise ValueError(f"ooo distance {self.ooo_distance} must lie in [0, window size {self.window_size}]")
        if self.min_arity < 2:
            raise ValueError("min arity must be >= 2")
        get_monoid(self.agg)


def value_maker(agg: str, rng: random.Random) -> Callable[[], object]:
    """Draw a raw input and lift it into the aggregator's carrier set."""
    lift = get_monoid(agg).lift
    if agg == "concat":
        return lambda: lift(bytes([97 + rng.randrange(26)]))
    if agg == "max":
        return lambda: rng.random()
    if agg == "geomean":
        return lambda: lift(rng.uniform(0.5, 2.0))
    if agg == "bloom":
        return lambda: lift(rng.getrandbits(64))
    return lambda: lift(rng.randrange(100))


class SyntheticWindow:
    """A tree filled to n entries plus the timestamp bookkeeping around it."""

    def __init__(self, spec: WorkloadSpec, chunk: int = 4096):
        spec.check()
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.value = value_maker(spec.agg, self.rng)
        self.tree = Tree(get_monoid(spec.agg), spec.min_arity)
        self.next_body = 0
        body = spec.window_size - spec.ooo_distance
        while self.next_body < body:
            k = min(chunk, body - self.next_body)
            self.tree.bulk_insert(self.body_bulk(k))
        fut = spec.ooo_distance
        for s in range(0, fut, chunk):
            k = min(chunk, fut - s)
            self.tree.bulk_insert([(FUTURE_BASE + s + i, self.value()) for i in range(k)])

    def body_bulk(self, m: int) -> list:
        s = self.next_body
        self.next_body += m
        return [(s + i, self.value()) for i in range(m)]

    def evict_target(self, m: int) -> int:
        return self.tree.oldest_time() + m - 1


def run_synthetic(spec: WorkloadSpec, on_record: Optional[Callable[[LatencyRecord], None]] = None
                  ) -> tuple[list[LatencyRecord], StatsSummary]:
    win = SyntheticWindow(spec)
    tree = win.tree
    ctr = tree.counters
    clock = time.perf_counter_ns
    m = 1 if spec.mode == "single" else spec.bulk_size
    records: list[LatencyRecord] = []

    def record(kind: str, nanos: int, items: int) -> None:
        rec = LatencyRecord(len(records), kind, nanos, ctr.nodes_visited, ctr.combines, items)
        records.append(rec)
        if on_record is not None:
            on_record(rec)

    def timed_evict() -> None:
        target = win.evict_target(m)
        ctr.reset()
        if spec.emulate_loop:
            evict = tree.evict
            t0 = clock()
            for _ in range(m):
                evict()
            t1 = clock()
        else:
            t0 = clock()
            tree.bulk_evict(target)
            t1 = clock()
        record("evict", t1 - t0, m)

    def timed_insert() -> None:
        bulk = win.body_bulk(m)
        ctr.reset()
        if spec.emulate_loop:
            insert = tree.insert
            t0 = clock()
            for t, v in bulk:
                insert(t, v)
            t1 = clock()
        else:
            t0 = clock()
            tree.bulk_insert(bulk)
            t1 = clock()
        record("insert", t1 - t0, m)

    for _ in range(spec.iters):
        if spec.mode == "evict":
            timed_evict()
            tree.bulk_insert(win.body_bulk(m))
        elif spec.mode == "insert":
            timed_insert()
            tree.bulk_evict(win.evict_target(m))
        else:
            timed_evict()
            timed_insert()
        tree.query()
    return records, summarize(records)
