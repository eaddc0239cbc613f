"""Linear orders, the interval topology, and gap machinery."""
import pytest

from efftop.coding import unpair
from efftop.foundations import FinSet
from efftop.covers import CoverStatus, cover_check_bruteforce
from efftop.orders import (
    ABOVE,
    BELOW,
    Cut,
    completeness_check,
    cut_to_noncover,
    finite_order,
    gap_set,
    gaps_from_hausdorff,
    hausdorff_from_gaps,
    interval_index,
    interval_is_degenerate,
    interval_to_ray_family,
    ordered_cover_relation,
    ordered_interval_cover_relation,
    ordered_space,
    permutation_order,
    point_code,
    ray_index,
    ray_to_interval,
    validate_order,
)
from efftop.pathologies import (
    default_injection,
    deficiency_set,
    injection_ordered_space,
    prefix_injection,
    range_enumeration,
    successor_from_gaps,
)


def test_permutation_order():
    order = permutation_order([3, 0, 2, 1])
    assert order.sorted_points(3) == [3, 0, 2, 1]
    assert validate_order(order, 3).ok


def test_prefix_injection_deficiencies():
    inj = prefix_injection([3, 0, 5, 1])
    # 0 loses to 1 and 3 (values 0, 1 below 3); 2 loses to 3 (1 below 5)
    assert inj.deficiency_member(0) and inj.deficiency_member(2)
    assert not inj.deficiency_member(1) and not inj.deficiency_member(3)
    D = deficiency_set(inj)
    assert set(D.stage(10)) == {0, 2}
    assert D.first_decrease(12) is None


def test_prefix_injection_rejects_repeats():
    with pytest.raises(ValueError):
        prefix_injection([1, 1])


def test_injection_order_matches_values():
    inj = prefix_injection([3, 0, 5, 1])
    order = injection_ordered_space(inj)
    assert order.sorted_points(3) == [1, 3, 0, 2]
    topped = injection_ordered_space(inj, with_top=True)
    # shifted labels, with the fresh point 0 on top
    assert topped.sorted_points(4) == [2, 4, 1, 3, 0]
    assert validate_order(topped, 8).ok


def test_range_enumeration():
    inj = prefix_injection([3, 0, 5, 1])
    assert range_enumeration(inj, 4) == [0, 1, 3, 5]


def test_successor_walk_matches_range():
    inj = prefix_injection([3, 0, 5, 1])
    order = injection_ordered_space(inj)
    pts = order.sorted_points(5)
    gaps = list(zip(pts, pts[1:]))
    values = successor_from_gaps(inj, gaps, 5)
    assert values == range_enumeration(inj, len(values))


def test_successor_walk_rejects_wrong_gaps():
    inj = prefix_injection([3, 0, 5, 1])
    with pytest.raises(ValueError):
        successor_from_gaps(inj, [(1, 0), (0, 1)], 5)


def test_ordered_space_base_valid():
    order = permutation_order([3, 0, 2, 1])
    report = validate_order(order, 3)
    assert report.ok
    space = ordered_space(order)
    got = cover_check_bruteforce(
        space, FinSet.of([interval_index(BELOW, ABOVE)]), 3)
    assert got.covers


def test_ray_relation_agrees_with_bruteforce():
    order = permutation_order([3, 0, 2, 1])
    space = ordered_space(order)
    rel = ordered_cover_relation(order)
    pool = [ray_index(x, side) for x in range(4) for side in (0, 1)]
    from efftop.covers import iter_index_families
    for fam in iter_index_families(pool, 2):
        got = rel.decide(fam)
        intervals = FinSet.of(ray_to_interval(c) for c in fam)
        brute = cover_check_bruteforce(space, intervals, 3)
        assert got.covers == brute.covers, f"family {list(fam)}"


def test_degenerate_interval_codes():
    order = finite_order(4)
    empty = interval_index(BELOW, BELOW)
    assert interval_is_degenerate(empty)
    assert interval_is_degenerate(interval_index(ABOVE, ABOVE))
    assert not interval_is_degenerate(interval_index(BELOW, ABOVE))
    with pytest.raises(ValueError):
        interval_to_ray_family(order, empty)
    # a degenerate member adds nothing to a covering family
    rel = ordered_interval_cover_relation(order)
    whole = interval_index(BELOW, ABOVE)
    assert rel.decide(FinSet.of([whole, empty])).covers
    got = rel.decide(FinSet.of([empty]))
    assert got.status is CoverStatus.NOT_COVERS


def test_interval_relation_agrees_with_bruteforce():
    order = permutation_order([2, 0, 1])
    space = ordered_space(order)
    rel = ordered_interval_cover_relation(order)
    endpoints = [BELOW, ABOVE] + [point_code(x) for x in range(3)]
    pool = [interval_index(lo, hi) for lo in endpoints for hi in endpoints]
    from efftop.covers import iter_index_families
    for fam in iter_index_families(pool, 2):
        got = rel.decide(fam)
        brute = cover_check_bruteforce(space, fam, 2)
        assert got.covers == brute.covers, f"family {list(fam)}"


def test_gap_set_finite_order():
    order = finite_order(4)
    assert gap_set(order, 3) == [(0, 1), (1, 2), (2, 3)]


def test_gap_set_dense_order_empty():
    # dyadic-style dense order: value comparison of k/2^level codes
    def frac(c):
        k, lvl = unpair(c)
        return (2 * k + 1) / (1 << (lvl + 1))

    from efftop.orders import LinearOrder
    dense = LinearOrder(name="dyadic", domain_member=lambda x: True,
                        less=lambda x, y: frac(x) < frac(y))
    assert gap_set(dense, 6) == []


def test_hausdorff_from_gaps_roundtrip():
    order = finite_order(5)
    gaps = gap_set(order, 4)
    h0, h1 = hausdorff_from_gaps(order, gaps, probe_bound=8)
    space = ordered_space(order)
    for x0 in range(5):
        for x1 in range(5):
            if x0 == x1:
                continue
            i0, i1 = h0(x0, x1), h1(x0, x1)
            assert space.basic_member(x0, i0)
            assert space.basic_member(x1, i1)
            assert not any(space.basic_member(y, i0)
                           and space.basic_member(y, i1) for y in range(5))
    is_gap = gaps_from_hausdorff(order, h0, h1)
    assert [(a, b) for a in range(5) for b in range(5) if is_gap(a, b)] \
        == gaps


def test_completeness_check_two_blocks():
    # evens before odds, each block in natural order: a cut with no endpoint
    from efftop.orders import LinearOrder

    def less(x, y):
        bx, by = x % 2, y % 2
        if bx != by:
            return bx == 0
        if bx == 1:
            return x > y
        return x < y

    two_blocks = LinearOrder(name="two-blocks",
                             domain_member=lambda x: True, less=less)
    cut = completeness_check(two_blocks, 8)
    assert isinstance(cut, Cut)
    lo, hi = cut.boundary
    assert lo % 2 == 0 and hi % 2 == 1
    code = cut_to_noncover(cut)
    assert len(code.stage(4)) > 0


def test_completeness_check_finite_complete():
    assert completeness_check(finite_order(6), 5) is None


def test_default_injection_everywhere_deficient_on_evens():
    inj = default_injection()
    D = deficiency_set(inj)
    got = set(D.stage(64))
    assert got == {x for x in range(63) if x % 2 == 0}
