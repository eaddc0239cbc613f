"""Separation witnesses and the open-code routes between them."""
import pytest

from efftop.coding import pair
from efftop.foundations import FinSet
from efftop.covers import Exactness, brute_force_relation
from efftop.separation import (
    ClosedSet,
    DiscreteWitness,
    HausdorffWitness,
    compact_subspace_closed_code,
    diagonal_code_from_hausdorff,
    discrete_to_hausdorff,
    hausdorff_from_diagonal_code,
    normal_separation,
    regular_separation,
    validate_discrete_witness,
    validate_hausdorff_witness,
)
from efftop.spaces import constant_code, discrete_space, product
from efftop.registry import resolve


def test_discrete_witness_valid():
    space = discrete_space(6)
    w = DiscreteWitness(d=lambda x: x)
    assert validate_discrete_witness(space, w, 5).ok


def test_discrete_witness_flags_fat_set():
    space = discrete_space(6)
    w = DiscreteWitness(d=lambda x: 0)
    report = validate_discrete_witness(space, w, 5)
    kinds = {v["kind"] for v in report.violations}
    assert "membership" in kinds or "not-singleton" in kinds


def test_discrete_to_hausdorff():
    space = discrete_space(6)
    w = discrete_to_hausdorff(DiscreteWitness(d=lambda x: x))
    assert validate_hausdorff_witness(space, w, 5).ok


def test_hausdorff_witness_flags_overlap():
    space = discrete_space(4)
    bad = HausdorffWitness(h0=lambda a, b: a, h1=lambda a, b: a)
    report = validate_hausdorff_witness(space, bad, 3)
    kinds = {v["kind"] for v in report.violations}
    assert "membership" in kinds or "overlap" in kinds


def test_diagonal_code_roundtrip():
    space = discrete_space(5)
    w = discrete_to_hausdorff(DiscreteWitness(d=lambda x: x))
    code = diagonal_code_from_hausdorff(space, w)
    got = hausdorff_from_diagonal_code(space, code, 4, 8)
    assert validate_hausdorff_witness(space, got, 4).ok


def test_diagonal_code_rejects_touching_rectangle():
    space = discrete_space(5)
    bad = constant_code([pair(0, 0)])
    with pytest.raises(ValueError):
        hausdorff_from_diagonal_code(space, bad, 4, 8)


def test_diagonal_code_rejects_missing_pairs():
    space = discrete_space(5)
    thin = constant_code([pair(0, 1)])
    with pytest.raises(ValueError):
        hausdorff_from_diagonal_code(space, thin, 4, 8)


def test_compact_subspace_closed_code():
    space = discrete_space(8)
    w = discrete_to_hausdorff(DiscreteWitness(d=lambda x: x))
    part = lambda x: x < 3
    rel = brute_force_relation(
        discrete_space(3), 2, Exactness.EXACT)
    code = compact_subspace_closed_code(space, w, part, rel, 7)
    final = code.stage(7)
    # the coded complement holds every outside point and no inside point
    for x in range(8):
        hit = any(space.basic_member(x, i) for i in final)
        assert hit == (x >= 3)


def test_regular_separation_on_hypersimple():
    inst = resolve("hypersimple:default")
    # the closed complement of a cofinite basic set is finite; the set at
    # (1, 2) holds 1 and everything from stage 3 on, so the part is {0, 2}
    basic = FinSet.of([pair(1, 2)]).encode()
    assert inst.space.index_member(basic)
    closed = ClosedSet(
        member=lambda x: not inst.space.basic_member(x, basic),
        complement_code=constant_code([basic]))
    x1 = 1  # inside the basic set, outside the closed part
    assert not closed.member(x1)
    got = regular_separation(inst.space, inst.hausdorff, closed, x1,
                             point_bound=24, stage_bound=32)
    first = got.first.stage(32)
    second = got.second.stage(32)
    pts = inst.space.points(24)
    in_first = {x for x in pts
                if any(inst.space.basic_member(x, i) for i in first)}
    in_second = {x for x in pts
                 if any(inst.space.basic_member(x, i) for i in second)}
    assert {x for x in pts if closed.member(x)} <= in_first
    assert x1 in in_second
    assert not in_first & in_second


def test_regular_separation_rejects_point_in_part():
    inst = resolve("hypersimple:default")
    closed = ClosedSet(member=lambda x: x == 3,
                       complement_code=constant_code([]))
    with pytest.raises(ValueError):
        regular_separation(inst.space, inst.hausdorff, closed, 3, 16, 16)


def test_regular_separation_needs_coverable_part():
    inst = resolve("hypersimple:default")
    # an infinite closed part defeats any finite family of point witnesses
    closed = ClosedSet(member=lambda x: x % 2 == 1,
                       complement_code=constant_code([]))
    with pytest.raises(ValueError):
        regular_separation(inst.space, inst.hausdorff, closed, 0, 24, 24)


def test_normal_separation_effective():
    space = discrete_space(10)
    w = discrete_to_hausdorff(DiscreteWitness(d=lambda x: x))
    got = normal_separation(space, w, lambda x: x < 3,
                            lambda x: 5 <= x < 8, 9, 12)
    first = got.first.stage(12)
    second = got.second.stage(12)
    pts = list(range(10))
    in_first = {x for x in pts
                if any(space.basic_member(x, i) for i in first)}
    in_second = {x for x in pts
                 if any(space.basic_member(x, i) for i in second)}
    assert set(range(3)) <= in_first
    assert set(range(5, 8)) <= in_second
    assert not in_first & in_second


def test_normal_separation_sigma2_route():
    space = discrete_space(8)
    w = discrete_to_hausdorff(DiscreteWitness(d=lambda x: x))
    got = normal_separation(space, w, lambda x: x < 2,
                            lambda x: x >= 6, 7, 10,
                            sigma2=True, index_bound=7)
    assert got.bounds["sigma2"]


def test_normal_separation_rejects_overlap():
    space = discrete_space(6)
    w = discrete_to_hausdorff(DiscreteWitness(d=lambda x: x))
    with pytest.raises(ValueError):
        normal_separation(space, w, lambda x: x < 3, lambda x: x > 1, 5, 8)
