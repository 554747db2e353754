"""Latency records, nearest-rank summaries and the stats CSV format."""
from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional, Sequence

HEADER = ["op_index", "op_kind", "nanos", "nodes_visited", "combines"]


@dataclass
class LatencyRecord:
    op_index: int
    op_kind: str
    nanos: int
    nodes_visited: int
    combines: int
    items: int = 1  # entries touched; feeds throughput, not written to CSV


@dataclass
class StatsSummary:
    count: int
    mean: float
    median: float
    p99_9: float
    p99_999: float
    throughput: float  # items per second of timed work

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def nearest_rank(sorted_values: Sequence[float], pct: float) -> float:
    """Smallest sample with at least ``pct`` percent of samples at or below it."""
    if not sorted_values:
        return math.nan
    # exact arithmetic: 99.9 / 100 * 1000 must give rank 999, not 1000
    rank = max(1, math.ceil(Fraction(str(pct)) * len(sorted_values) / 100))
    return sorted_values[rank - 1]


def summarize(records: Iterable[LatencyRecord]) -> StatsSummary:
    records = list(records)
    if not records:
        return StatsSummary(0, math.nan, math.nan, math.nan, math.nan, 0.0)
    nanos = sorted(r.nanos for r in records)
    total = sum(nanos)
    items = sum(r.items for r in records)
    return StatsSummary(
        count=len(nanos),
        mean=total / len(nanos),
        median=nearest_rank(nanos, 50),
        p99_9=nearest_rank(nanos, 99.9),
        p99_999=nearest_rank(nanos, 99.999),
        throughput=items / total * 1e9 if total else math.inf,
    )


def emit_stats(records: Iterable[LatencyRecord], summary: Optional[StatsSummary] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow([r.op_index, r.op_kind, r.nanos, r.nodes_visited, r.combines])
    if summary is not None:
        for f in fields(summary):
            buf.write(f"# {f.name}={getattr(summary, f.name)!r}\n")
    return buf.getvalue()


def parse_stats(text: str) -> tuple[list[LatencyRecord], dict[str, float]]:
    rows, summary = [], {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            summary[key] = float(val)
        elif line:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader, None)
    if header is not None and header != HEADER:
        raise ValueError(f"unexpected stats header {header}")
    for op_index, kind, nanos, visited, combines in reader:
        rows.append(LatencyRecord(int(op_index), kind, int(nanos), int(visited), int(combines)))
    return rows, summary
