"""Base axioms, constructions, and open-code checks."""
import pytest
from dataclasses import replace

from efftop.coding import pair
from efftop.foundations import FinSet
from efftop.spaces import (
    ContinuityWitness,
    Subbase,
    code_union_stage,
    constant_code,
    discrete_space,
    effectively_open_check,
    fold_witness,
    point_masks,
    preimage_open_code,
    product,
    staged_code,
    subbase_closure,
    subspace,
    validate_base,
    validate_continuity_witness,
)


def interval_subbase(n: int) -> Subbase:
    """Sets {x : x >= i} on 0..n-1; closed under intersection up to max."""
    return Subbase(
        name=f"tails:{n}",
        point_member=lambda x: 0 <= x < n,
        index_member=lambda i: 0 <= i < n,
        member=lambda x, i: x >= i,
    )


def test_discrete_base_valid():
    report = validate_base(discrete_space(6), 10, 10)
    assert report.ok, report.violations


def test_discrete_rejects_nonpositive():
    with pytest.raises(ValueError):
        discrete_space(0)


def test_validate_base_flags_coverage_hole():
    space = replace(discrete_space(6), basic_member=lambda x, i: x == i < 4)
    report = validate_base(space, 10, 10)
    kinds = {v["kind"] for v in report.violations}
    assert "coverage" in kinds


def test_validate_base_flags_bad_witness():
    # witness index leaks outside the intersection
    sb = interval_subbase(6)
    space = replace(subbase_closure(sb),
                    witness_k=lambda x, s, t: FinSet().encode())
    report = validate_base(space, 5, 40)
    kinds = {v["kind"] for v in report.violations}
    assert "witness-subset" in kinds


def test_point_masks():
    space = discrete_space(4)
    masks = point_masks(space, [0, 1, 2, 3], [1, 3])
    assert masks == {1: 0b0010, 3: 0b1000}


def test_closure_empty_family_is_whole_space():
    space = subbase_closure(interval_subbase(5))
    whole = FinSet().encode()
    assert all(space.basic_member(x, whole) for x in range(5))
    report = validate_base(space, 4, 30)
    assert report.ok, report.violations


def test_closure_membership_is_intersection():
    sb = interval_subbase(8)
    space = subbase_closure(sb)
    code = FinSet.of([2, 5]).encode()
    for x in range(8):
        assert space.basic_member(x, code) == (x >= 5)


def test_closure_witness_folds():
    space = subbase_closure(interval_subbase(8))
    i = FinSet.of([2]).encode()
    j = FinSet.of([5]).encode()
    k = fold_witness(space, 6, [i, j])
    assert space.basic_member(6, k)
    for x in range(8):
        assert space.basic_member(x, k) == (
            space.basic_member(x, i) and space.basic_member(x, j))


def test_subspace_restricts_points_only():
    space = subspace(discrete_space(10), lambda x: x % 2 == 0)
    assert space.points(9) == [0, 2, 4, 6, 8]
    assert space.indices(9) == list(range(10))
    report = validate_base(space, 9, 9)
    assert report.ok, report.violations


def test_product_base_valid_and_coded():
    a, b = discrete_space(3), discrete_space(3)
    p = product(a, b)
    assert p.point_member(pair(2, 1))
    assert not p.point_member(pair(3, 0))
    assert p.basic_member(pair(2, 1), pair(2, 1))
    report = validate_base(p, 4, 4)
    assert report.ok, report.violations


def test_code_union_stage_tracks_first_reach():
    space = discrete_space(4)
    code = staged_code([FinSet(), FinSet.of([1]), FinSet.of([1, 3])])
    reached = code_union_stage(space, code, 5, [0, 1, 2, 3])
    assert reached == {1: 1, 3: 2}


def test_effectively_open_check_accepts_match():
    space = discrete_space(6)
    code = constant_code([0, 2, 4])
    report = effectively_open_check(space, code, lambda x: x % 2 == 0, 5, 10)
    assert report.ok and not report.bounds["caveat"]


def test_effectively_open_check_flags_leak():
    space = discrete_space(6)
    code = constant_code([0, 1])
    report = effectively_open_check(space, code, lambda x: x == 0, 5, 10)
    kinds = {v["kind"] for v in report.violations}
    assert "union-outside-target" in kinds


def test_effectively_open_check_caveat_when_unfinished():
    space = discrete_space(6)
    growing = staged_code([FinSet.of(range(k // 3)) for k in range(30)])
    report = effectively_open_check(space, growing, lambda x: True, 5, 10)
    assert report.ok and report.bounds["caveat"]
    # declared finished, the missing points become violations
    report = effectively_open_check(space, growing, lambda x: True, 5, 10,
                                    assume_stabilized=True)
    assert not report.ok


def test_continuity_witness_doubling():
    dom, cod = discrete_space(4), discrete_space(8)
    f = lambda x: 2 * x
    w = ContinuityWitness(phi=lambda x, j: x)
    report = validate_continuity_witness(f, w, dom, cod, 3, 7)
    assert report.ok, report.violations


def test_continuity_witness_flags_leak():
    dom, cod = discrete_space(4), discrete_space(4)
    f = lambda x: 0
    # the named set {x, x+1 mod 4} is too big to land inside f^{-1}(V_j)
    leaky = replace(dom, basic_member=lambda x, i: x in (i, (i + 1) % 4))
    w = ContinuityWitness(phi=lambda x, j: x)
    report = validate_continuity_witness(f, w, leaky, cod, 3, 3)
    assert report.ok  # constant maps leak nothing
    g = lambda x: x % 2
    report = validate_continuity_witness(g, w, leaky, cod, 3, 3)
    assert not report.ok


def test_preimage_open_code():
    dom, cod = discrete_space(4), discrete_space(8)
    f = lambda x: 2 * x
    w = ContinuityWitness(phi=lambda x, j: x)
    code = preimage_open_code(f, w, dom, cod, constant_code([2, 4]), 3, 7)
    final = code.stage(6)
    assert set(final) == {1, 2}


def test_preimage_rejects_bad_witness():
    dom, cod = discrete_space(4), discrete_space(4)
    w = ContinuityWitness(phi=lambda x, j: 99)
    with pytest.raises(ValueError):
        preimage_open_code(lambda x: x, w, dom, cod, constant_code([1]), 3, 3)
