"""Brute-force reference window used for differential testing."""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Any, Iterable

from .monoid import Monoid


class OracleWindow:
    """Sorted parallel lists; every operation is the literal set semantics."""

    def __init__(self, monoid: Monoid):
        self.monoid = monoid
        self.times: list[Any] = []
        self.values: list[Any] = []

    def __len__(self) -> int:
        return len(self.times)

    def query(self) -> Any:
        return self.monoid.fold(self.values)

    def bulk_evict(self, t: Any) -> int:
        i = bisect_right(self.times, t)
        del self.times[:i]
        del self.values[:i]
        return i

    def bulk_insert(self, bulk: Iterable[tuple[Any, Any]]) -> None:
        comb = self.monoid.combine
        times, values = self.times, self.values
        for t, v in bulk:
            i = bisect_left(times, t)
            if i < len(times) and times[i] == t:
                values[i] = comb(values[i], v)
            else:
                times.insert(i, t)
                values.insert(i, v)

    def insert(self, t: Any, v: Any) -> None:
        self.bulk_insert(((t, v),))

    def evict(self) -> None:
        if self.times:
            self.bulk_evict(self.times[0])

    def oldest_time(self):
        return self.times[0] if self.times else None

    def youngest_time(self):
        return self.times[-1] if self.times else None

    def items(self) -> list[tuple[Any, Any]]:
        return list(zip(self.times, self.values))

    def dump(self) -> str:
        return "".join(f"{t} {v!r}\n" for t, v in self.items())


class ListModel:
    """Even simpler model: an unsorted dict, sorted only when queried.

    Used to cross-check :class:`OracleWindow` itself.
    """

    def __init__(self, monoid: Monoid):
        self.monoid = monoid
        self.entries: dict[Any, Any] = {}

    def query(self) -> Any:
        return self.monoid.fold(v for _, v in sorted(self.entries.items()))

    def bulk_evict(self, t: Any) -> None:
        self.entries = {k: v for k, v in self.entries.items() if k > t}

    def bulk_insert(self, bulk: Iterable[tuple[Any, Any]]) -> None:
        for t, v in bulk:
            if t in self.entries:
                self.entries[t] = self.monoid.combine(self.entries[t], v)
            else:
                self.entries[t] = v

    def items(self) -> list[tuple[Any, Any]]:
        return sorted(self.entries.items())
