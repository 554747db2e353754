import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bulkswag.monoid import (
    BLOOM_BITS, MONOIDS, Bloom, Concat, GeoMean, Max, Sum, SumOverflowError, bloom_bits, bloom_contains,
    geomean_finalize, get_monoid,
)


def sample(name, rng):
    m = MONOIDS[name]
    if name == "sum":
        return rng.randrange(-10**6, 10**6)
    if name == "max":
        return rng.choice([rng.uniform(-1e6, 1e6), m.identity])
    if name == "geomean":
        return m.lift(rng.uniform(1e-3, 1e3))
    if name == "bloom":
        return m.lift(rng.getrandbits(64))
    return bytes(rng.randrange(256) for _ in range(rng.randrange(9)))


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_associativity_sampled(name):
    rng = random.Random(name)
    c = MONOIDS[name].combine
    for _ in range(10_000):
        a, b, d = (sample(name, rng) for _ in range(3))
        assert c(c(a, b), d) == c(a, c(b, d))


@pytest.mark.parametrize("name", sorted(MONOIDS))
def test_identity_two_sided(name):
    rng = random.Random(name + "id")
    m = MONOIDS[name]
    for _ in range(10_000):
        v = sample(name, rng)
        assert m.combine(m.identity, v) == v == m.combine(v, m.identity)


def test_max_example():
    assert Max.combine(4, Max.combine(2, 5)) == 5


def test_concat_is_not_commutative():
    assert Concat.combine(b"ab", b"c") == b"abc"
    assert Concat.combine(b"a", b"b") != Concat.combine(b"b", b"a")


def test_fold():
    assert Sum.fold([]) == 0
    assert Concat.fold([b"a", b"b", b"c"]) == b"abc"
    assert Sum.fold([1, 2, 3, 4]) == 10
    assert Max.fold([]) == -math.inf


def test_sum_overflow_reported():
    with pytest.raises(SumOverflowError):
        Sum.combine(2**63 - 1, 1)
    with pytest.raises(SumOverflowError):
        Sum.combine(-(2**63), -1)
    assert Sum.combine(2**63 - 2, 1) == 2**63 - 1


def test_geomean_componentwise_and_finalize():
    a, b = GeoMean.lift(2.0), GeoMean.lift(8.0)
    agg = GeoMean.combine(a, b)
    assert agg == (a[0] + b[0], 2)
    assert geomean_finalize(agg) == pytest.approx(4.0, rel=1e-9)
    assert geomean_finalize(GeoMean.identity) is None
    with pytest.raises(ValueError):
        GeoMean.lift(0.0)


def test_bloom_membership_and_idempotence():
    x = Bloom.lift(12345)
    assert bin(x).count("1") <= 7
    assert x < 1 << BLOOM_BITS
    assert Bloom.combine(x, x) == x
    y = Bloom.lift(999)
    assert Bloom.combine(x, y) == Bloom.combine(y, x)
    assert bloom_contains(Bloom.combine(x, y), 12345)
    assert bloom_bits(12345) == x


def test_get_monoid():
    assert get_monoid("sum") is Sum
    with pytest.raises(ValueError):
        get_monoid("median")


@settings(max_examples=300)
@given(st.lists(st.binary(max_size=8), max_size=20), st.integers(0, 20))
def test_concat_fold_split_anywhere(values, cut):
    cut = min(cut, len(values))
    assert Concat.combine(Concat.fold(values[:cut]), Concat.fold(values[cut:])) == b"".join(values)
