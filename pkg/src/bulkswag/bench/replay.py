"""Replay a timestamped CSV through a time-based window, and make such CSVs."""
from __future__ import annotations

import csv
import math
import random
from bisect import bisect_right
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, TextIO, Union

from sortedcontainers import SortedList

from ..monoid import get_monoid, hash_key
from ..oracle import OracleWindow
from ..tree import Tree
from .stats import LatencyRecord, StatsSummary, summarize

# one tick is one microsecond
TICKS_PER_UNIT = {"s": 1_000_000, "ms": 1_000, "us": 1}


def log2_bin(v: int) -> int:
    """Bin 0 holds 0; bin b >= 1 holds [2**(b-1), 2**b - 1]."""
    return v.bit_length()


def bin_bounds(b: int) -> tuple[int, int]:
    if b == 0:
        return 0, 0
    return 1 << (b - 1), (1 << b) - 1


class Log2Histogram:
    def __init__(self) -> None:
        self.counts: dict[int, int] = {}

    def add(self, v: int) -> None:
        b = v.bit_length()
        self.counts[b] = self.counts.get(b, 0) + 1

    def rows(self) -> list[tuple[int, int, int]]:
        return [(*bin_bounds(b), c) for b, c in sorted(self.counts.items())]

    def mass_above(self, v: int) -> int:
        return sum(c for b, c in self.counts.items() if bin_bounds(b)[0] > v)

    def to_csv(self) -> str:
        lines = ["bin_lo,bin_hi,count"]
        lines += [f"{lo},{hi},{c}" for lo, hi, c in self.rows()]
        return "\n".join(lines) + "\n"


@dataclass
class ReplayResult:
    summary: StatsSummary
    hist_n: Log2Histogram
    hist_m: Log2Histogram
    hist_d: Log2Histogram
    rows: int = 0
    skipped: int = 0
    max_m: int = 0
    max_d: int = 0
    records: list[LatencyRecord] = field(default_factory=list, repr=False)


def _column(header: list[str], col: Union[str, int]) -> int:
    if isinstance(col, int) or str(col).isdigit():
        return int(col)
    try:
        return header.index(col)
    except ValueError:
        raise ValueError(f"column {col!r} not in header {header}") from None


def parse_rows(lines: Iterable[str], ts_col="timestamp", val_col="value", ts_unit: str = "s",
               agg: str = "sum") -> Iterator[Optional[tuple[int, object]]]:
    """Yield (tick, lifted value) per data row, or None for a malformed row."""
    scale = TICKS_PER_UNIT[ts_unit]
    lift = get_monoid(agg).lift
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None:
        return
    ti, vi = _column(header, ts_col), _column(header, val_col)
    for row in reader:
        try:
            raw_t, raw_v = row[ti], row[vi]
            tick = round(float(raw_t) * scale)
            if agg == "bloom":
                v = lift(hash_key(raw_v))
            elif agg == "concat":
                v = lift(raw_v.encode())
            else:
                num = float(raw_v)
                v = lift(int(num) if agg == "sum" else num)
        except (IndexError, ValueError, OverflowError):
            yield None
            continue
        yield tick, v


def run_replay(source: Union[str, TextIO], window_duration: int, agg: str = "sum", ts_col="timestamp",
               val_col="value", ts_unit: str = "s", min_arity: int = 4, keep_records: bool = False) -> ReplayResult:
    """Per row: measure d, insert, evict everything older than newest - W, query."""
    if isinstance(source, str):
        with open(source, newline="") as fh:
            return run_replay(fh, window_duration, agg, ts_col, val_col, ts_unit, min_arity, keep_records)
    tree = Tree(get_monoid(agg), min_arity)
    ctr = tree.counters
    live = SortedList()
    hist_n, hist_m, hist_d = Log2Histogram(), Log2Histogram(), Log2Histogram()
    clock = time.perf_counter_ns
    records: list[LatencyRecord] = []
    total_ns = rows = skipped = max_m = max_d = 0
    samples: list[int] = []
    newest: Optional[int] = None
    for parsed in parse_rows(source, ts_col, val_col, ts_unit, agg):
        if parsed is None:
            skipped += 1
            continue
        t, v = parsed
        d = len(live) - live.bisect_right(t)
        if newest is None or t > newest:
            newest = t
        cutoff = newest - window_duration
        ctr.reset()
        t0 = clock()
        tree.insert(t, v)
        evicted = tree.bulk_evict(cutoff)
        tree.query()
        ns = clock() - t0
        if t not in live:
            live.add(t)
        if evicted:
            del live[: live.bisect_right(cutoff)]
        n = len(live)
        hist_n.add(n)
        hist_m.add(evicted)
        hist_d.add(d)
        max_m = max(max_m, evicted)
        max_d = max(max_d, d)
        samples.append(ns)
        total_ns += ns
        if keep_records:
            records.append(LatencyRecord(rows, "record", ns, ctr.nodes_visited, ctr.combines))
        rows += 1
    if tree.size() != len(live):
        raise AssertionError(f"window size drifted: tree {tree.size()} vs index {len(live)}")
    summary = summarize(LatencyRecord(i, "record", ns, 0, 0) for i, ns in enumerate(samples))
    return ReplayResult(summary, hist_n, hist_m, hist_d, rows, skipped, max_m, max_d, records)


def generate_csv(out: TextIO, rows: int, seed: int = 0, rate: float = 200.0, burst_every: int = 50_000,
                 burst_len: int = 2_000, late_prob: float = 1e-3, late_seconds: float = 30.0,
                 jitter_seconds: float = 0.05) -> None:
    """Write a bursty, out-of-order ``timestamp,value`` CSV (seconds).

    Event times advance with exponential gaps at ``rate`` per second, except
    during bursts where ``burst_len`` events share one timestamp. Arrival order
    adds a small jitter to most rows and a large delay to a few late ones.
    """
    rng = random.Random(seed)
    events = []
    t = 0.0
    i = 0
    while i < rows:
        if burst_every and i % burst_every == burst_every // 2:
            k = min(burst_len, rows - i)
            t += 1.0
            events.extend((t, t) for _ in range(k))
            i += k
            continue
        t += rng.expovariate(rate)
        delay = rng.uniform(0, jitter_seconds)
        if rng.random() < late_prob:
            delay += late_seconds
        events.append((t + delay, t))
        i += 1
    events.sort(key=lambda e: e[0])
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["timestamp", "value"])
    for _, ev in events:
        w.writerow([f"{ev:.6f}", rng.randrange(1000)])


def histogram_oracle(source: Union[str, TextIO], window_duration: int, agg: str = "sum", ts_col="timestamp",
                     val_col="value", ts_unit: str = "s") -> tuple[Log2Histogram, Log2Histogram, Log2Histogram]:
    """Recompute the n/m/d histograms with plain sorted lists, no tree."""
    if isinstance(source, str):
        with open(source, newline="") as fh:
            return histogram_oracle(fh, window_duration, agg, ts_col, val_col, ts_unit)
    win = OracleWindow(get_monoid(agg))
    hn, hm, hd = Log2Histogram(), Log2Histogram(), Log2Histogram()
    newest = -math.inf
    for parsed in parse_rows(source, ts_col, val_col, ts_unit, agg):
        if parsed is None:
            continue
        t, v = parsed
        hd.add(len(win.times) - bisect_right(win.times, t))
        newest = max(newest, t)
        win.insert(t, v)
        hm.add(win.bulk_evict(newest - window_duration))
        hn.add(len(win))
    return hn, hm, hd
