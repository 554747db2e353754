"""``bench`` command line: synthetic workloads, CSV replay, CSV generation."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from ..monoid import MONOIDS
from .replay import TICKS_PER_UNIT, generate_csv, run_replay
from .stats import emit_stats
from .workload import MODES, PRESETS, WorkloadSpec, run_synthetic


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description="Sliding-window finger B-tree benchmarks.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("synthetic", help="timed synthetic (n, m, d) workload")
    s.add_argument("--preset", choices=sorted(PRESETS), help="size preset; explicit flags still win")
    s.add_argument("--window-size", type=int, help="entries kept in the window (default 2^20)")
    s.add_argument("--bulk-size", type=int, default=1024)
    s.add_argument("--ooo-distance", type=int, default=0)
    s.add_argument("--agg", choices=sorted(MONOIDS), default="sum")
    s.add_argument("--mode", choices=MODES, default="evict")
    s.add_argument("--min-arity", type=int, default=4)
    s.add_argument("--iters", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emulate-loop", action="store_true", help="loop of single ops instead of one bulk op")
    s.add_argument("--out", help="stats CSV path (default stdout)")

    r = sub.add_parser("replay", help="replay a timestamp,value CSV through a time-based window")
    r.add_argument("--input", required=True)
    r.add_argument("--window-duration", type=int, required=True, help="window length in ticks (1 tick = 1 us)")
    r.add_argument("--agg", choices=sorted(MONOIDS), default="sum")
    r.add_argument("--ts-col", default="timestamp")
    r.add_argument("--val-col", default="value")
    r.add_argument("--ts-unit", choices=sorted(TICKS_PER_UNIT), default="s")
    r.add_argument("--min-arity", type=int, default=4)
    r.add_argument("--hist-out", help="prefix for <prefix>_n.csv, _m.csv, _d.csv")
    r.add_argument("--out", help="per-record stats CSV path")

    g = sub.add_parser("generate", help="write a bursty out-of-order CSV for replay")
    g.add_argument("--rows", type=int, default=1_000_000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--rate", type=float, default=200.0, help="events per second")
    g.add_argument("--late-prob", type=float, default=1e-3)
    g.add_argument("--late-seconds", type=float, default=30.0)
    g.add_argument("--out", required=True)
    return p


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "synthetic":
            preset = PRESETS.get(args.preset or "desk")
            spec = WorkloadSpec(
                window_size=args.window_size or preset["window_size"],
                bulk_size=args.bulk_size,
                ooo_distance=args.ooo_distance,
                agg=args.agg,
                mode=args.mode,
                min_arity=args.min_arity,
                iters=args.iters,
                seed=args.seed,
                emulate_loop=args.emulate_loop,
            )
            records, summary = run_synthetic(spec)
            _write(args.out, emit_stats(records, summary))
        elif args.cmd == "replay":
            res = run_replay(args.input, args.window_duration, args.agg, args.ts_col, args.val_col,
                             args.ts_unit, args.min_arity, keep_records=bool(args.out))
            if args.out:
                _write(args.out, emit_stats(res.records, res.summary))
            if args.hist_out:
                for name, h in (("n", res.hist_n), ("m", res.hist_m), ("d", res.hist_d)):
                    _write(f"{args.hist_out}_{name}.csv", h.to_csv())
            s = res.summary
            print(f"rows={res.rows} skipped={res.skipped} max_m={res.max_m} max_d={res.max_d} "
                  f"mean_ns={s.mean:.0f} median_ns={s.median:.0f} p99.9_ns={s.p99_9:.0f} "
                  f"p99.999_ns={s.p99_999:.0f} throughput={s.throughput:.0f}/s")
        else:
            with open(args.out, "w", newline="") as fh:
                generate_csv(fh, args.rows, args.seed, rate=args.rate, late_prob=args.late_prob,
                             late_seconds=args.late_seconds)
    except (ValueError, OSError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
