"""Spaces whose basic sets each miss at most one point.

The basic set at i holds x when the predicate approves (i, x) or some
earlier argument was already rejected, so it misses exactly the least
rejected argument, if one exists.  A finite family therefore fails to cover
only when all its members miss the same point, which makes the cover
relation a counterexample comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..covers import (
    COVERS,
    CoverDecision,
    CoverRelation,
    Exactness,
    lift_cover_relation_to_closure,
    memoized,
    not_covers,
    unknown,
)
from ..foundations import FinSet
from ..spaces import SpaceBase, Subbase, subbase_closure

# sentinel for "no rejection found below the probe bound"
PAST_BOUND = -1


@dataclass(frozen=True)
class Pi01Space:
    subbase: Subbase
    space: SpaceBase
    subbase_relation: CoverRelation
    relation: CoverRelation
    counterexample: Callable[[int], int | None]
    exact: bool


def pi01_compact_space(
    phi0: Callable[[int, int], bool],
    counterexample: Callable[[int], int | None] | None = None,
    probe_bound: int = 4096,
    name: str = "pi01",
) -> Pi01Space:
    """Space from a total decidable predicate.

    counterexample(i) must return the least x the predicate rejects for i,
    or None when it rejects nothing; with it the cover relation is exact.
    Without it the least rejection is searched below probe_bound, and a
    family whose members all look rejection-free stays undecided.
    """
    exact = counterexample is not None

    def sought(i: int) -> int | None:
        for x in range(probe_bound + 1):
            if not phi0(i, x):
                return x
        return PAST_BOUND

    cex = counterexample if exact else sought

    def basic(x: int, i: int) -> bool:
        return phi0(i, x) or any(not phi0(i, y) for y in range(x))

    sb = Subbase(
        name=name,
        point_member=lambda x: True,
        index_member=lambda i: True,
        member=basic,
    )
    space = subbase_closure(sb)

    def decide(t: FinSet) -> CoverDecision:
        if not t:
            return not_covers(witness=0)
        vals = [cex(i) for i in t]
        if any(v is None for v in vals):
            return COVERS
        known = {v for v in vals if v != PAST_BOUND}
        if len(known) >= 2:
            return COVERS
        if PAST_BOUND not in vals:
            return not_covers(witness=vals[0])
        if known:
            # the shared candidate is approved by every past-bound member
            return COVERS
        return unknown(detail=f"no rejection below {probe_bound} "
                              f"for any member")

    sub_rel = CoverRelation(
        decide=memoized(decide),
        exactness=Exactness.EXACT if exact else Exactness.BOUNDED,
        name=f"{name}-subbase",
    )
    rel = lift_cover_relation_to_closure(sub_rel, name=f"{name}-closure")
    return Pi01Space(
        subbase=sb,
        space=space,
        subbase_relation=sub_rel,
        relation=rel,
        counterexample=cex,
        exact=exact,
    )


def full_set_readoff(p: Pi01Space, i: int) -> bool:
    """Is the basic set at i everything; the predicate-to-cover readoff."""
    return p.subbase_relation.decide(FinSet.of([i])).covers


def fixture_alltrue() -> Pi01Space:
    return pi01_compact_space(lambda i, x: True,
                              counterexample=lambda i: None,
                              name="pi01-alltrue")


def fixture_holes() -> Pi01Space:
    """Rejects exactly (i, i): the basic set at i misses i alone."""
    return pi01_compact_space(lambda i, x: x != i,
                              counterexample=lambda i: i,
                              name="pi01-holes")


def fixture_parity() -> Pi01Space:
    """Even indices approve everything; odd index i first rejects at i."""
    return pi01_compact_space(
        lambda i, x: i % 2 == 0 or x < i,
        counterexample=lambda i: None if i % 2 == 0 else i,
        name="pi01-parity")
