"""Cover decisions, subcover extraction, and the relation combinators."""
import pytest
from hypothesis import given, settings, strategies as st

from efftop.coding import pair, unpair
from efftop.foundations import (
    FinSet,
    PredicateKind,
    StagePredicate,
    constant_enumset,
    enumset_from_stages,
)
from efftop.covers import (
    AlexanderCertificate,
    BoundedUnknown,
    CoverStatus,
    Exactness,
    FailurePoint,
    InfiniteBranch,
    SubcoverCertificate,
    accumulation_point_search,
    alexander_wkl_subcover,
    brute_force_relation,
    closed_subspace_cover_relation,
    closed_subspace_subcover,
    cofinite_point_subcover,
    cover_check_bruteforce,
    iter_index_families,
    lift_cover_relation_to_closure,
    loeb_product_subcover,
    minimal_cover_search,
    product_accumulation,
    product_cover_relation,
)
from efftop.spaces import (
    OpenCode,
    Subbase,
    constant_code,
    discrete_space,
    product,
    staged_code,
    subbase_closure,
)
from efftop.pathologies import fixture_alltrue, fixture_holes


def test_bruteforce_finds_least_witness():
    space = discrete_space(5)
    got = cover_check_bruteforce(space, FinSet.of([0, 2, 3]), 4)
    assert got.status is CoverStatus.NOT_COVERS and got.witness == 1
    assert cover_check_bruteforce(space, FinSet.of(range(5)), 4).covers


def test_iter_index_families_order_and_count():
    fams = list(iter_index_families([3, 1, 2], 2))
    assert fams[0] == FinSet()
    sizes = [len(f) for f in fams]
    assert sizes == sorted(sizes)
    assert len(fams) == 1 + 3 + 3


@given(st.lists(st.integers(0, 255), min_size=1, max_size=10),
       st.integers(1, 4))
@settings(max_examples=60)
def test_minimal_cover_search_agrees_with_enumeration(masks, max_size):
    items = list(enumerate(masks))
    target = (1 << 6) - 1
    got = minimal_cover_search(target, items, max_size)
    best = None
    for fam in iter_index_families(range(len(masks)), max_size,
                                   include_empty=False):
        union = 0
        for i in fam:
            union |= masks[i]
        if union & target == target:
            best = fam
            break
    assert got == best


def test_minimal_cover_search_empty_target():
    assert minimal_cover_search(0, [(0, 1)], 2) == FinSet()


def test_lifted_closure_relation():
    space = discrete_space(3)
    base = brute_force_relation(space, 2, Exactness.EXACT)
    lifted = lift_cover_relation_to_closure(base)
    # {{0},{1},{2}} covers; the empty family inside a family covers all
    fam = FinSet.of([FinSet.of([i]).encode() for i in range(3)])
    assert lifted.decide(fam).covers
    assert lifted.decide(FinSet.of([FinSet().encode()])).covers
    got = lifted.decide(FinSet.of([FinSet.of([0, 1]).encode()]))
    assert got.status is CoverStatus.NOT_COVERS


def test_closed_subspace_subcover():
    space = discrete_space(8)
    cover = staged_code([FinSet.of(range(k)) for k in range(9)])
    complement = constant_code([5, 6, 7])
    got = closed_subspace_subcover(space, cover, complement, 7, 8)
    assert isinstance(got, SubcoverCertificate) and got.verified
    # the certificate lives inside the first code
    assert set(got.chosen) <= set(range(8))


def test_closed_subspace_relation_sides_agree():
    space = discrete_space(6)
    base = brute_force_relation(space, 5, Exactness.EXACT)
    complement = constant_code([4, 5])
    rel = closed_subspace_cover_relation(space, base, complement, 5, 6)
    assert rel.decide(FinSet.of([0, 1, 2, 3])).covers
    got = rel.decide(FinSet.of([0, 1]))
    assert got.status is CoverStatus.NOT_COVERS and got.witness == 2


def test_cofinite_point_subcover_on_pi01():
    p = fixture_alltrue()
    selector = StagePredicate(fn=lambda i, s: True, kind=PredicateKind.RAW)
    got = cofinite_point_subcover(p.space, selector, 0, 40, 12, 64)
    assert isinstance(got, SubcoverCertificate) and got.verified


def test_cofinite_rejects_isolated_anchor():
    space = discrete_space(6)
    selector = StagePredicate(fn=lambda i, s: True, kind=PredicateKind.RAW)
    with pytest.raises(ValueError):
        cofinite_point_subcover(space, selector, 0, 5, 5, 8)


def test_loeb_product_subcover_roundtrip():
    left = subbase_closure(Subbase(
        name="tails", point_member=lambda x: x < 6,
        index_member=lambda i: i < 6, member=lambda x, i: x >= i))
    right = fixture_holes()
    # rectangles: whole left x {basic i} for i = 0, 1
    whole = FinSet().encode()
    rects = [pair(whole, FinSet.of([i]).encode()) for i in (0, 1)]
    code = constant_code(rects)
    got = loeb_product_subcover(left, right.space, right.relation, code,
                                point_bound=8, stage_bound=16)
    assert isinstance(got, SubcoverCertificate) and got.verified


def test_loeb_reports_failing_fiber():
    left = subbase_closure(Subbase(
        name="tails", point_member=lambda x: x < 4,
        index_member=lambda i: i < 4, member=lambda x, i: x >= i))
    right = fixture_holes()
    whole = FinSet().encode()
    # one rectangle whose right part misses point 0
    rects = [pair(whole, FinSet.of([0]).encode())]
    got = loeb_product_subcover(left, right.space, right.relation,
                                constant_code(rects),
                                point_bound=6, stage_bound=16)
    assert isinstance(got, FailurePoint)


def test_alexander_certificate_and_branch():
    space = discrete_space(3)
    sb = Subbase(name="singletons", point_member=space.point_member,
                 index_member=space.index_member,
                 member=lambda x, i: x == i)
    rel = brute_force_relation(space, 2, Exactness.EXACT)
    # one forced pick per level; every selection covers after three
    fams = [FinSet.of([k]) for k in range(3)]
    got = alexander_wkl_subcover(sb, rel, fams, depth_bound=16,
                                 point_bound=2)
    assert isinstance(got, AlexanderCertificate) and got.verified
    assert got.height == 3
    # a constant non-covering family walks one branch to the bound
    bad = [FinSet.of([0])] * 20
    got = alexander_wkl_subcover(sb, rel, bad, depth_bound=16, point_bound=2)
    assert isinstance(got, InfiniteBranch) and len(got.prefix) == 16
    # exhausting the list before the bound stays open
    got = alexander_wkl_subcover(sb, rel, bad[:4], depth_bound=16,
                                 point_bound=2)
    assert isinstance(got, BoundedUnknown)


def test_accumulation_point_search():
    p = fixture_alltrue()
    # constant sequence accumulates at its value
    got = accumulation_point_search(p.space, lambda n: 3, 10, 10, 24, 8)
    assert got is not None


def test_product_accumulation():
    p = fixture_alltrue()
    seq = [pair(3, 5)] * 40
    got = product_accumulation(p.space, p.space, seq, 10, 8, 32, 8)
    assert got is not None
    x, y = unpair(got)
    assert p.space.point_member(x) and p.space.point_member(y)


def test_product_cover_relation_rectangles():
    a = discrete_space(2)
    ra = brute_force_relation(a, 1, Exactness.EXACT)
    rel = product_cover_relation(ra, ra, a, a, point_bound=4)
    full = FinSet.of([pair(i, j) for i in range(2) for j in range(2)])
    assert rel.decide(full).covers
    got = rel.decide(FinSet.of([pair(0, 0)]))
    assert got.status is CoverStatus.NOT_COVERS
