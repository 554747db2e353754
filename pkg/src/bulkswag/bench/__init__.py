from .replay import Log2Histogram, ReplayResult, generate_csv, histogram_oracle, run_replay
from .stats import LatencyRecord, StatsSummary, emit_stats, nearest_rank, parse_stats, summarize
from .workload import WorkloadSpec, run_synthetic

__all__ = [
    "LatencyRecord", "Log2Histogram", "ReplayResult", "StatsSummary", "WorkloadSpec", "emit_stats",
    "generate_csv", "histogram_oracle", "nearest_rank", "parse_stats", "run_replay", "run_synthetic",
    "summarize",
]
