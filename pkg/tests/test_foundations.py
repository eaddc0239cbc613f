"""Pairing codes, finite sets, staged sets."""
import pytest
from hypothesis import given, strategies as st

from efftop.coding import (
    decode_bits,
    decode_seq,
    encode_bits,
    encode_seq,
    iter_pairs,
    pair,
    pair3,
    pairs_below,
    unpair,
    unpair3,
)
from efftop.foundations import (
    EnumSet,
    FinSet,
    PredicateKind,
    StagePredicate,
    constant_enumset,
    enumset_from_predicate,
    enumset_from_stages,
    enumset_intersect_fin,
    enumset_union,
    exists_stage,
    is_finset_code,
    stabilization_stage,
)

nats = st.integers(min_value=0, max_value=10_000)
small_sets = st.lists(st.integers(0, 200), max_size=8)


@given(nats, nats)
def test_pair_roundtrip(x, y):
    assert unpair(pair(x, y)) == (x, y)


@given(nats)
def test_unpair_roundtrip(z):
    x, y = unpair(z)
    assert pair(x, y) == z


def test_pair_rejects_negatives():
    with pytest.raises(ValueError):
        pair(-1, 0)
    with pytest.raises(ValueError):
        unpair(-1)


@given(nats, nats, nats)
def test_pair3_roundtrip(x, y, z):
    assert unpair3(pair3(x, y, z)) == (x, y, z)


@given(st.lists(st.integers(0, 500), max_size=6))
def test_seq_roundtrip(items):
    assert decode_seq(encode_seq(items)) == tuple(items)


@given(st.lists(st.sampled_from([0, 1]), max_size=10))
def test_bits_roundtrip(bits):
    assert decode_bits(encode_bits(bits)) == tuple(bits)


def test_bits_reject_nonbinary():
    with pytest.raises(ValueError):
        encode_bits([0, 2])
    with pytest.raises(ValueError):
        decode_bits(encode_seq([2]))


def test_iter_pairs_is_code_order():
    got = list(iter_pairs(20))
    assert got == [unpair(z) for z in range(21)]
    assert all(pair(x, y) == z for z, (x, y) in enumerate(got))


def test_pairs_below_sorted_product():
    assert pairs_below([0, 2], [1, 3]) == sorted(
        pair(x, y) for x in (0, 2) for y in (1, 3))


@given(small_sets)
def test_finset_canonical(values):
    fs = FinSet.of(values)
    assert list(fs) == sorted(set(values))
    assert len(fs) == len(set(values))
    assert bool(fs) == bool(values)


@given(small_sets, small_sets)
def test_finset_ops_mirror_sets(a, b):
    fa, fb = FinSet.of(a), FinSet.of(b)
    sa, sb = set(a), set(b)
    assert set(fa.union(fb)) == sa | sb
    assert set(fa.intersect(fb)) == sa & sb
    assert set(fa.difference(fb)) == sa - sb
    assert fa.issubset(fb) == (sa <= sb)


@given(small_sets)
def test_finset_code_roundtrip(values):
    fs = FinSet.of(values)
    code = fs.encode()
    assert FinSet.decode(code) == fs
    assert is_finset_code(code)


def test_finset_code_rejects_disorder():
    assert not is_finset_code(encode_seq([3, 1]))
    assert not is_finset_code(encode_seq([2, 2]))


def test_finset_rejects_bad_tuples():
    with pytest.raises(ValueError):
        FinSet((2, 1))
    with pytest.raises(ValueError):
        FinSet((-1,))


def test_stabilization_stage():
    p = StagePredicate(fn=lambda x, s: s >= x, kind=PredicateKind.LIMIT)
    assert stabilization_stage(p, 5, 20) == 5
    assert stabilization_stage(p, 0, 20) == 0
    jitter = StagePredicate(fn=lambda x, s: s % 2 == 0,
                            kind=PredicateKind.LIMIT)
    assert stabilization_stage(jitter, 0, 20) == 20


def test_exists_stage():
    p = StagePredicate(fn=lambda x, s: s == 2 * x, kind=PredicateKind.RAW)
    assert exists_stage(p, 3, 10) == 6
    assert exists_stage(p, 30, 10) is None


def test_enumset_stage_table():
    e = enumset_from_stages([FinSet.of([0]), FinSet.of([0, 2])])
    assert list(e.stage(0)) == [0]
    assert list(e.stage(5)) == [0, 2]
    assert e.member_at(2, 1) and not e.member_at(2, 0)
    assert e.first_decrease(10) is None
    with pytest.raises(ValueError):
        e.stage(-1)


def test_enumset_first_decrease_flags_shrinking():
    shrink = EnumSet(lambda s: FinSet() if s else FinSet.of([1]))
    assert shrink.first_decrease(3) == 0


def test_enumset_union_and_restrict():
    a = constant_enumset(FinSet.of([1, 2]))
    b = enumset_from_stages([FinSet(), FinSet.of([5])])
    u = enumset_union(a, b)
    assert list(u.stage(0)) == [1, 2]
    assert list(u.stage(1)) == [1, 2, 5]
    r = enumset_intersect_fin(u, FinSet.of([2, 5]))
    assert list(r.stage(1)) == [2, 5]


def test_enumset_from_predicate_needs_monotone():
    raw = StagePredicate(fn=lambda x, s: True, kind=PredicateKind.RAW)
    with pytest.raises(ValueError):
        enumset_from_predicate(raw)


def test_enumset_from_predicate_window():
    p = StagePredicate(fn=lambda x, s: s >= x, kind=PredicateKind.MONOTONE)
    e = enumset_from_predicate(p, arg_bound=10)
    assert e.member_at(3, 3) and not e.member_at(3, 2)
    assert e.first_decrease(12) is None
