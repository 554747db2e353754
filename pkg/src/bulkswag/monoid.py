"""Aggregation monoids.

A monoid is an identity element plus an associative combine. Nothing here
assumes commutativity or invertibility; :class:`Concat` exists precisely so
that tests can catch ordering bugs.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class Monoid:
    """Identity plus associative binary operator over some carrier set.

    ``lift`` maps a raw input item (a number or a 64-bit key) into the carrier
    set; ``lower`` maps an aggregate back to a user-facing result. Both are
    outside the algebra and never called by the tree.
    """

    name: str
    identity: Any
    combine: Callable[[Any, Any], Any]
    lift: Callable[[Any], Any] = lambda x: x
    lower: Callable[[Any], Any] = lambda x: x

    def fold(self, values: Iterable[Any]) -> Any:
        acc = self.identity
        combine = self.combine
        for v in values:
            acc = combine(acc, v)
        return acc


class SumOverflowError(OverflowError):
    pass


def _checked_add(a: int, b: int) -> int:
    r = a + b
    if r > INT64_MAX or r < INT64_MIN:
        raise SumOverflowError(f"64-bit sum overflow: {a} + {b}")
    return r


# GeoMean keeps log(x) as a fixed-point integer so that the combine is exactly
# associative (float addition is not).
GEO_SCALE_BITS = 40
_GEO_SCALE = float(1 << GEO_SCALE_BITS)


def _geo_lift(x: float) -> tuple[int, int]:
    if x <= 0:
        raise ValueError(f"geomean needs positive inputs, got {x}")
    return (round(math.log(x) * _GEO_SCALE), 1)


def _geo_combine(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    return (a[0] + b[0], a[1] + b[1])


def geomean_finalize(agg: tuple[int, int]) -> float | None:
    """exp(mean log); ``None`` for the empty aggregate."""
    logsum, count = agg
    if count == 0:
        return None
    return math.exp(logsum / _GEO_SCALE / count)


BLOOM_BITS = 8192
BLOOM_HASHES = 7


def bloom_bits(key: int, nbits: int = BLOOM_BITS, k: int = BLOOM_HASHES) -> int:
    """Bit pattern for one 64-bit key using double hashing h1 + i*h2."""
    digest = hashlib.blake2b((key & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"), digest_size=16).digest()
    h1 = int.from_bytes(digest[:8], "little")
    h2 = int.from_bytes(digest[8:], "little") | 1
    bits = 0
    for i in range(k):
        bits |= 1 << ((h1 + i * h2) % nbits)
    return bits


def bloom_contains(agg: int, key: int) -> bool:
    pattern = bloom_bits(key)
    return agg & pattern == pattern


def _bloom_lift(x: Any) -> int:
    return bloom_bits(hash_key(x))


def hash_key(x: Any) -> int:
    """Stable 64-bit key for an arbitrary scalar (ints pass through)."""
    if isinstance(x, int):
        return x & 0xFFFFFFFFFFFFFFFF
    data = str(x).encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def _concat_lift(x: Any) -> bytes:
    if isinstance(x, bytes):
        return x
    return str(x).encode()


def _max(a, b):
    return a if a >= b else b


Sum = Monoid("sum", 0, _checked_add, lift=int)
Max = Monoid("max", float("-inf"), _max)
GeoMean = Monoid("geomean", (0, 0), _geo_combine, lift=_geo_lift, lower=geomean_finalize)
Bloom = Monoid("bloom", 0, lambda a, b: a | b, lift=_bloom_lift)
Concat = Monoid("concat", b"", lambda a, b: a + b, lift=_concat_lift)

MONOIDS: dict[str, Monoid] = {m.name: m for m in (Sum, Max, GeoMean, Bloom, Concat)}


def get_monoid(name: str) -> Monoid:
    try:
        return MONOIDS[name]
    except KeyError:
        raise ValueError(f"unknown aggregator {name!r}; choose from {sorted(MONOIDS)}") from None
