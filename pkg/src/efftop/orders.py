"""Linear orders and their interval topologies.

Order endpoints are coded with two reserved tokens below the point codes:
0 is bottom-infinity, 1 is top-infinity, and the point x is x + 2.  An
interval index is the coded pair of its endpoint codes; rays are intervals
with one infinite end.  The witness for two intervals is (max of the lower
endpoints, min of the upper endpoints), so it never depends on the point.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Callable, Iterable, Sequence

from .coding import pair, unpair
from .covers import (
    COVERS,
    CoverDecision,
    CoverRelation,
    Exactness,
    lift_cover_relation_to_closure,
    memoized,
    not_covers,
)
from .foundations import FinSet
from .spaces import OpenCode, SpaceBase, ValidationReport, constant_code

BELOW = 0  # bottom endpoint token
ABOVE = 1  # top endpoint token


def point_code(x: int) -> int:
    return x + 2


def is_point_code(e: int) -> bool:
    return e >= 2


def decode_endpoint(e: int) -> int | None:
    """The point under an endpoint code; None for the infinite ends."""
    return e - 2 if e >= 2 else None


@dataclass(frozen=True)
class LinearOrder:
    """A decidable strict order on a decidable set of naturals."""

    name: str
    domain_member: Callable[[int], bool]
    less: Callable[[int, int], bool]
    point_iter: Callable[[int], list[int]] | None = None

    def points(self, bound: int) -> list[int]:
        if self.point_iter is not None:
            return self.point_iter(bound)
        return [x for x in range(bound + 1) if self.domain_member(x)]

    def sorted_points(self, bound: int) -> list[int]:
        pts = self.points(bound)
        return sorted(pts, key=cmp_to_key(
            lambda a, b: -1 if self.less(a, b) else (1 if self.less(b, a)
                                                     else 0)))


def finite_order(n: int) -> LinearOrder:
    return LinearOrder(
        name=f"finite:{n}",
        domain_member=lambda x: 0 <= x < n,
        less=lambda x, y: x < y,
    )


def permutation_order(perm: Sequence[int]) -> LinearOrder:
    """Order on 0..n-1 by position in the permutation."""
    rank = {x: p for p, x in enumerate(perm)}
    return LinearOrder(
        name=f"perm:{list(perm)}",
        domain_member=lambda x: x in rank,
        less=lambda x, y: rank[x] < rank[y],
    )


def validate_order(order: LinearOrder, point_bound: int) -> ValidationReport:
    """Irreflexivity, trichotomy and transitivity over the scale points."""
    report = ValidationReport(subject=order.name,
                              bounds={"points": point_bound})
    pts = order.points(point_bound)
    for x in pts:
        if order.less(x, x):
            report.add("irreflexive", x=x)
    for x in pts:
        for y in pts:
            if x == y:
                continue
            xy, yx = order.less(x, y), order.less(y, x)
            if xy == yx:
                report.add("trichotomy", x=x, y=y)
    for x in pts:
        for y in pts:
            if not order.less(x, y):
                continue
            for z in pts:
                if order.less(y, z) and not order.less(x, z):
                    report.add("transitive", x=x, y=y, z=z)
    return report


def _endpoint_below(order: LinearOrder, e: int, x: int) -> bool:
    """Does endpoint e lie strictly below point x."""
    if e == BELOW:
        return True
    if e == ABOVE:
        return False
    return order.less(e - 2, x)


def _endpoint_above(order: LinearOrder, e: int, x: int) -> bool:
    if e == ABOVE:
        return True
    if e == BELOW:
        return False
    return order.less(x, e - 2)


def _lower_max(order: LinearOrder, a: int, b: int) -> int:
    """Max of two lower endpoint codes in the order with BELOW least."""
    if a == BELOW:
        return b
    if b == BELOW:
        return a
    return a if order.less(b - 2, a - 2) or a == b else b


def _upper_min(order: LinearOrder, a: int, b: int) -> int:
    if a == ABOVE:
        return b
    if b == ABOVE:
        return a
    return a if order.less(a - 2, b - 2) or a == b else b


def interval_index(lo: int, hi: int) -> int:
    return pair(lo, hi)


def ordered_space(order: LinearOrder) -> SpaceBase:
    """Interval topology of a linear order as a coded base.

    Indices are coded endpoint pairs; the empty intervals that arise from
    reversed endpoints are kept (they are harmless and keep the index set
    decidable).
    """

    def index_member(c: int) -> bool:
        lo, hi = unpair(c)
        for e in (lo, hi):
            if e >= 2 and not order.domain_member(e - 2):
                return False
        return True

    def basic_member(x: int, c: int) -> bool:
        if not order.domain_member(x):
            return False
        lo, hi = unpair(c)
        return _endpoint_below(order, lo, x) and _endpoint_above(order, hi, x)

    def witness(x: int, c: int, d: int) -> int:
        lo0, hi0 = unpair(c)
        lo1, hi1 = unpair(d)
        return pair(_lower_max(order, lo0, lo1), _upper_min(order, hi0, hi1))

    def index_iter(bound: int) -> list[int]:
        ends = [BELOW, ABOVE] + [point_code(x) for x in order.points(bound)]
        return sorted(pair(lo, hi) for lo in ends for hi in ends)

    return SpaceBase(
        name=f"ordered({order.name})",
        point_member=order.domain_member,
        index_member=index_member,
        basic_member=basic_member,
        witness_k=witness,
        point_iter=order.point_iter,
        index_iter=index_iter,
        witness_uniform=True,
    )


def ray_index(x: int, side: int) -> int:
    """side 0: everything below x; side 1: everything above x."""
    return pair(x, side)


def ray_to_interval(code: int) -> int:
    x, side = unpair(code)
    if side == 0:
        return interval_index(BELOW, point_code(x))
    return interval_index(point_code(x), ABOVE)


def ordered_cover_relation(order: LinearOrder) -> CoverRelation:
    """Exact finite cover relation for the ray subbase.

    A finite ray family covers the whole order exactly when some downward ray
    endpoint lies strictly above some upward ray endpoint; otherwise the max
    of the downward endpoints (or any point at all when there are none) is
    uncovered.  The criterion needs no point bound, so the relation is EXACT.
    """

    def decide(t: FinSet) -> CoverDecision:
        downs, ups = [], []
        for code in t:
            x, side = unpair(code)
            if not order.domain_member(x):
                continue
            (downs if side == 0 else ups).append(x)
        for d in downs:
            for u in ups:
                if order.less(u, d):
                    return COVERS
        witness = None
        if downs:
            witness = downs[0]
            for d in downs[1:]:
                if order.less(witness, d):
                    witness = d
        return not_covers(witness=witness,
                          detail="no downward ray tops an upward ray")

    return CoverRelation(decide=memoized(decide), exactness=Exactness.EXACT,
                         name=f"rays({order.name})")


def interval_is_degenerate(code: int) -> bool:
    """Empty by endpoint codes alone: below everything or above it."""
    lo, hi = unpair(code)
    return hi == BELOW or lo == ABOVE


def interval_to_ray_family(order: LinearOrder, code: int) -> FinSet:
    """An interval as the coded set of the rays it intersects to.

    Degenerate codes are refused: the empty ray family means the whole
    space under the closure convention, the opposite of an empty interval.
    """
    if interval_is_degenerate(code):
        raise ValueError(f"interval code {code} is empty by its endpoints")
    lo, hi = unpair(code)
    rays = []
    if lo >= 2:
        rays.append(ray_index(lo - 2, 1))
    if hi >= 2:
        rays.append(ray_index(hi - 2, 0))
    return FinSet.of(rays)


def ordered_interval_cover_relation(order: LinearOrder) -> CoverRelation:
    """Exact cover relation on interval indices, through the ray closure.

    Degenerate members denote the empty set and drop out of the family;
    reversed proper endpoints survive, since their ray pair intersects to
    the same empty set.
    """
    lifted = lift_cover_relation_to_closure(ordered_cover_relation(order))

    def decide(t: FinSet) -> CoverDecision:
        fam = FinSet.of(interval_to_ray_family(order, c).encode()
                        for c in t if not interval_is_degenerate(c))
        return lifted.decide(fam)

    return CoverRelation(decide=memoized(decide), exactness=Exactness.EXACT,
                         name=f"intervals({order.name})")


def gap_set(order: LinearOrder, point_bound: int,
            probe_bound: int | None = None) -> list[tuple[int, int]]:
    """Pairs of scale points with nothing strictly between them up to the
    probe bound (default 8N, enough for the shipped dense fixture)."""
    probe_bound = 8 * point_bound if probe_bound is None else probe_bound
    pts = order.sorted_points(point_bound)
    probe = order.points(probe_bound)
    gaps = []
    for lo, hi in zip(pts, pts[1:]):
        if not any(order.less(lo, z) and order.less(z, hi) for z in probe):
            gaps.append((lo, hi))
    return gaps


def hausdorff_from_gaps(
    order: LinearOrder,
    gaps: Iterable[tuple[int, int]],
    probe_bound: int,
) -> tuple[Callable[[int, int], int], Callable[[int, int], int]]:
    """Separating interval indices from gap knowledge.

    For a gap pair the two rays at the gap do the splitting; otherwise the
    first point strictly between is searched up to the probe bound, and
    running past it raises (the pair is a gap beyond scale knowledge).
    Equal arguments get the whole space, keeping the functions total.
    """
    gap_pairs = set(gaps)
    everything = interval_index(BELOW, ABOVE)

    def split(a: int, b: int) -> tuple[int, int]:
        # a < b in the order; returns (around a, around b)
        if (a, b) in gap_pairs:
            return (interval_index(BELOW, point_code(b)),
                    interval_index(point_code(a), ABOVE))
        for z in order.points(probe_bound):
            if order.less(a, z) and order.less(z, b):
                return (interval_index(BELOW, point_code(z)),
                        interval_index(point_code(z), ABOVE))
        raise ValueError(f"pair ({a},{b}) is a gap beyond scale knowledge")

    def h0(x0: int, x1: int) -> int:
        if x0 == x1:
            return everything
        if order.less(x0, x1):
            return split(x0, x1)[0]
        return split(x1, x0)[1]

    def h1(x0: int, x1: int) -> int:
        if x0 == x1:
            return everything
        if order.less(x0, x1):
            return split(x0, x1)[1]
        return split(x1, x0)[0]

    return h0, h1


def gaps_from_hausdorff(
    order: LinearOrder,
    h0: Callable[[int, int], int],
    h1: Callable[[int, int], int],
) -> Callable[[int, int], bool]:
    """Gap decision from a separating family: the pair (x0 < x1) is a gap
    exactly when the set around x0 stops at x1 and the set around x1 starts
    at x0."""

    def is_gap(x0: int, x1: int) -> bool:
        if x0 == x1 or not order.less(x0, x1):
            return False
        _, hi = unpair(h0(x0, x1))
        lo, _ = unpair(h1(x0, x1))
        return hi == point_code(x1) and lo == point_code(x0)

    return is_gap


@dataclass(frozen=True)
class Cut:
    """A violating scale cut: lower part, upper part, and the adjacent pair
    whose in-between region stayed inhabited at the probe bound."""

    lower: tuple[int, ...]
    upper: tuple[int, ...]
    boundary: tuple[int, int]


def completeness_check(order: LinearOrder, point_bound: int,
                       probe_bound: int | None = None) -> Cut | None:
    """First prefix cut of the sorted scale points whose boundary pair is not
    a gap at the probe bound; None means complete at scale.

    Full completeness is out of reach at desk scale: a violating cut here
    says only that the scale data cannot confirm an endpoint on either side.
    Orders with one-sided limits (a top point over an increasing chain) are
    flagged too, and that is the honest answer at this scale.
    """
    probe_bound = 8 * point_bound if probe_bound is None else probe_bound
    pts = order.sorted_points(point_bound)
    probe = order.points(probe_bound)
    for cut_at in range(1, len(pts)):
        lo, hi = pts[cut_at - 1], pts[cut_at]
        if any(order.less(lo, z) and order.less(z, hi) for z in probe):
            return Cut(lower=tuple(pts[:cut_at]), upper=tuple(pts[cut_at:]),
                       boundary=(lo, hi))
    return None


def cut_to_noncover(cut: Cut) -> OpenCode:
    """The ray cover associated with a cut: everything below each lower
    point, everything above each upper point.  Its finite subfamilies never
    satisfy the ray criterion."""
    rays = [ray_index(x, 0) for x in cut.lower]
    rays += [ray_index(x, 1) for x in cut.upper]
    return constant_code(rays, note="cut-noncover")
