"""The discrete-but-compact space built over an enumerable set.

Indices are pairs x <= y; the basic set at (x, y) holds x outright and picks
up every stage from the one where y enters the enumeration.  When y stays
out, the set is the singleton {x}, which makes the space discrete; when y
gets in, the set is cofinite.  A finite family covers exactly when some
member's y enters early enough to hand the tail over before the family's
first-coordinate coverage runs out, and that criterion is decidable with the
membership oracle in hand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..coding import pair, unpair
from ..covers import (
    COVERS,
    CoverDecision,
    CoverRelation,
    Exactness,
    lift_cover_relation_to_closure,
    memoized,
    not_covers,
)
from ..foundations import EnumSet, FinSet
from ..separation import DiscreteWitness
from ..spaces import SpaceBase, Subbase, subbase_closure


@dataclass(frozen=True)
class HypersimpleSpace:
    """The subbase, its intersection closure, and the oracle-backed
    machinery around them."""

    subbase: Subbase
    space: SpaceBase
    discrete: DiscreteWitness
    subbase_relation: CoverRelation
    relation: CoverRelation
    enum: EnumSet
    member: Callable[[int], bool]
    entry_stage: Callable[[int], int | None]


def hypersimple_space(
    A: EnumSet,
    member: Callable[[int], bool],
    name: str = "hypersimple",
    search_bound: int = 1 << 14,
) -> HypersimpleSpace:
    """Space over an enumerable set with exact membership oracle.

    The oracle must not be cofinite at scale; the discrete witness needs a
    co-element above every point it is asked about, and runs past
    search_bound rather than lie.
    """

    def entry_stage(y: int) -> int | None:
        if not member(y):
            return None
        hi = 1
        while y not in A.stage(hi):
            hi *= 2
            if hi > search_bound:
                raise ValueError(
                    f"{y} is in A per oracle but enters after stage "
                    f"{search_bound}")
        lo = hi // 2
        while lo < hi:
            mid = (lo + hi) // 2
            if y in A.stage(mid):
                hi = mid
            else:
                lo = mid + 1
        return hi

    def index_member(i: int) -> bool:
        x, y = unpair(i)
        return x <= y

    def basic(n: int, i: int) -> bool:
        x, y = unpair(i)
        return n == x or y in A.stage(n)

    sb = Subbase(
        name=name,
        point_member=lambda n: True,
        index_member=index_member,
        member=basic,
    )
    space = subbase_closure(sb)

    def d(x: int) -> int:
        y = x
        while member(y):
            y += 1
            if y > x + search_bound:
                raise ValueError(
                    f"no co-element above {x} within {search_bound}; "
                    f"the oracle looks cofinite")
        return FinSet.of([pair(x, y)]).encode()

    def decide(t: FinSet) -> CoverDecision:
        firsts = {unpair(i)[0] for i in t}
        c = 0
        while c in firsts:
            c += 1
        for i in t:
            x0, y0 = unpair(i)
            e = entry_stage(y0)
            if e is not None and e <= c:
                return COVERS
        return not_covers(witness=c)

    sub_rel = CoverRelation(
        decide=memoized(decide),
        exactness=Exactness.EXACT,
        name=f"{name}-subbase",
    )
    rel = lift_cover_relation_to_closure(sub_rel, name=f"{name}-closure")
    return HypersimpleSpace(
        subbase=sb,
        space=space,
        discrete=DiscreteWitness(d=d),
        subbase_relation=sub_rel,
        relation=rel,
        enum=A,
        member=member,
        entry_stage=entry_stage,
    )


def classify_subbase_set(hs: HypersimpleSpace, i: int) -> tuple[str, FinSet]:
    """("finite", the whole set) or ("cofinite", the exceptions)."""
    x, y = unpair(i)
    if x > y:
        raise ValueError(f"{i} is not an index")
    e = hs.entry_stage(y)
    if e is None:
        return ("finite", FinSet.of([x]))
    return ("cofinite", FinSet.of(n for n in range(e) if n != x))


def classify_closure_set(hs: HypersimpleSpace,
                         code: int) -> tuple[str, FinSet]:
    """Classification of a finite intersection; cofinite needs every factor
    cofinite."""
    fam = FinSet.decode(code)
    parts = [classify_subbase_set(hs, i) for i in fam]
    if all(kind == "cofinite" for kind, _ in parts):
        out = set()
        for _, exc in parts:
            out.update(exc)
        # a factor's own x rescues it from that factor's exceptions only
        out = {n for n in out
               if not all(hs.subbase.member(n, i) for i in fam)}
        return ("cofinite", FinSet.of(out))
    bound = 0
    for (kind, data), i in zip(parts, fam):
        if kind == "finite":
            bound = max(bound, (data.max() if data else 0) + 1)
        else:
            bound = max(bound, (data.max() + 2 if data else 1))
    members = [n for n in range(bound + 1)
               if all(hs.subbase.member(n, i) for i in fam)]
    return ("finite", FinSet.of(members))
