"""Two compact spaces from one limit family, with a non-compact product.

For each bit i the subbase set at (x, y) holds y outright plus every n
whose bit f_n(x) equals i, so it is cofinite when the limit at x is i and
finite otherwise.  Each space is compact by that dichotomy, but rectangles
over the two sides kill each other: any finite family of them is bounded
on one side by the finite parts, leaving a diagonal point uncovered.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..coding import pair, pair3, unpair, unpair3
from ..covers import (
    COVERS,
    BoundedUnknown,
    CoverDecision,
    CoverRelation,
    Exactness,
    lift_cover_relation_to_closure,
    memoized,
    not_covers,
)
from ..foundations import FinSet
from ..separation import DiscreteWitness
from ..spaces import DualDescriptionMismatch, SpaceBase, Subbase, \
    subbase_closure
from .generics import LIMIT_IN_FIRST, LimitFamily

BASIC = "basic"
DISCRETE = "discrete"


@dataclass(frozen=True)
class TychonoffPair:
    """The two sides: subbases, their closures, exact relations, and (for
    the discrete variant) singleton witnesses."""

    family: LimitFamily
    variant: str
    subbases: tuple[Subbase, Subbase]
    spaces: tuple[SpaceBase, SpaceBase]
    subbase_relations: tuple[CoverRelation, CoverRelation]
    relations: tuple[CoverRelation, CoverRelation]
    discrete: tuple[DiscreteWitness, DiscreteWitness] | None


def alternating_family() -> LimitFamily:
    """Fixture: the limit at x is the parity of x, settling by x mod 3."""
    def settle(x: int) -> int:
        return x % 3

    def limit(x: int) -> int:
        return x & 1

    def bit(n: int, x: int) -> int:
        return limit(x) if n >= settle(x) else 1 - limit(x)

    return LimitFamily(bit=bit, limit_arg=LIMIT_IN_FIRST, limit=limit,
                       settle=settle, note="alternating")


def _decode_basic(idx: int) -> tuple[int, int]:
    x, y = unpair(idx)
    return x, y


def tychonoff_spaces(F: LimitFamily, variant: str = BASIC,
                     probe_bound: int = 1 << 12) -> TychonoffPair:
    """Build both sides over the family.

    The subbase cover relations are exact: with the limit oracle every
    member is classified finite or cofinite, a determination bound is
    collected, and points below it are checked directly; anything above is
    swallowed by a cofinite member's tail, and when there is none the
    bound itself is an uncovered witness the scan already caught.
    """
    if F.limit_arg != LIMIT_IN_FIRST:
        raise ValueError("these spaces need limits in the first argument")
    if variant not in (BASIC, DISCRETE):
        raise ValueError(f"unknown variant {variant!r}")

    def build_side(i: int):
        if variant == BASIC:
            def index_member(idx: int) -> bool:
                x, y = unpair(idx)
                return x >= y

            def member(n: int, idx: int) -> bool:
                x, y = unpair(idx)
                return n == y or F.bit(n, x) == i

            def classify(idx: int) -> tuple[bool, int]:
                x, y = unpair(idx)
                return F.limit(x) == i, max(F.settle(x), y + 1)
        else:
            def index_member(idx: int) -> bool:
                w, x, y = unpair3(idx)
                return w >= x >= y

            def member(n: int, idx: int) -> bool:
                w, x, y = unpair3(idx)
                return n == y or (n >= w and F.bit(n, x) == i)

            def classify(idx: int) -> tuple[bool, int]:
                w, x, y = unpair3(idx)
                return F.limit(x) == i, max(F.settle(x), w, y + 1)

        sb = Subbase(
            name=f"tychonoff-{variant}-{i}",
            point_member=lambda n: True,
            index_member=index_member,
            member=member,
        )
        space = subbase_closure(sb)

        def decide(t: FinSet) -> CoverDecision:
            if not t:
                return not_covers(witness=0)
            bound = 0
            for idx in t:
                _, b = classify(idx)
                bound = max(bound, b)
            for n in range(bound + 1):
                if not any(member(n, idx) for idx in t):
                    return not_covers(witness=n)
            # a clean scan forces a cofinite member, whose tail covers the
            # rest
            return COVERS

        sub_rel = CoverRelation(
            decide=memoized(decide),
            exactness=Exactness.EXACT,
            name=f"tychonoff-{variant}-{i}-subbase",
        )
        rel = lift_cover_relation_to_closure(
            sub_rel, name=f"tychonoff-{variant}-{i}-closure")
        return sb, space, sub_rel, rel

    sb0, space0, subrel0, rel0 = build_side(0)
    sb1, space1, subrel1, rel1 = build_side(1)

    witnesses = None
    if variant == DISCRETE:
        def make_witness(i: int) -> DiscreteWitness:
            def d(n: int) -> int:
                x = n
                while F.limit(x) != 1 - i:
                    x += 1
                    if x > n + probe_bound:
                        raise ValueError(
                            f"no point above {n} with limit {1 - i} "
                            f"within {probe_bound}")
                w = max(F.settle(x), x)
                return FinSet.of([pair3(w, x, n)]).encode()

            return DiscreteWitness(d=d)

        witnesses = (make_witness(0), make_witness(1))

    return TychonoffPair(
        family=F,
        variant=variant,
        subbases=(sb0, sb1),
        spaces=(space0, space1),
        subbase_relations=(subrel0, subrel1),
        relations=(rel0, rel1),
        discrete=witnesses,
    )


@dataclass(frozen=True)
class NoncoverWitness:
    """Diagonal point missing from the union of the listed rectangles."""

    z: int
    point: int  # coded product point (z, z)
    low_side: FinSet  # triples whose first-side set is finite
    high_side: FinSet
    bounds: dict

    def to_json(self) -> dict:
        return {"z": self.z, "point": self.point,
                "low_side": list(self.low_side),
                "high_side": list(self.high_side),
                "bounds": self.bounds}


def canonical_cover_triples(code_bound: int) -> list[int]:
    """Codes of the full-cover triples (x, y0, y1), x >= max(y0, y1), up to
    the code bound."""
    out = []
    for c in range(code_bound + 1):
        x, y0, y1 = unpair3(c)
        if x >= y0 and x >= y1:
            out.append(c)
    return out


def tychonoff_noncover_witness(
    F: LimitFamily,
    a: FinSet,
    check_bound: int,
) -> NoncoverWitness | BoundedUnknown:
    """Uncovered diagonal point for a finite set of cover triples.

    Each triple (x, y0, y1) contributes the rectangle of its two subbase
    sets; the side whose bit disagrees with the limit at x is finite, and z
    is taken past every such finite part, so (z, z) escapes every
    rectangle on one side or the other.  Unconfirmed stabilization turns
    into a bounded-unknown answer rather than a wrong witness.
    """
    for c in a:
        x, y0, y1 = unpair3(c)
        if not (x >= y0 and x >= y1):
            raise ValueError(f"{c} decodes to a malformed triple")
        if not F.check_stabilized(x, check_bound):
            return BoundedUnknown(
                reason=f"limit at {x} unconfirmed",
                bounds={"stages": check_bound})

    def finite_top(x: int, y: int, i: int) -> int:
        hits = [n for n in range(F.settle(x)) if F.bit(n, x) == i]
        return max([y] + hits)

    low, high = [], []
    z = 0
    for c in a:
        x, y0, y1 = unpair3(c)
        if F.limit(x) == 1:
            low.append(c)  # bit-0 side finite
            z = max(z, finite_top(x, y0, 0) + 1)
        else:
            high.append(c)  # bit-1 side finite
            z = max(z, finite_top(x, y1, 1) + 1)

    for c in a:
        x, y0, y1 = unpair3(c)
        in0 = z == y0 or F.bit(z, x) == 0
        in1 = z == y1 or F.bit(z, x) == 1
        if in0 and in1:
            raise DualDescriptionMismatch(
                f"({z},{z}) still lies in the rectangle of {c}")

    return NoncoverWitness(
        z=z, point=pair(z, z),
        low_side=FinSet.of(low), high_side=FinSet.of(high),
        bounds={"stages": check_bound})
