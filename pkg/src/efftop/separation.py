"""Separation witnesses and the constructions that move between them.

A discrete witness names a basic set that pins each point down to itself; a
Hausdorff witness names disjoint basic sets around any two distinct points.
The constructions below convert witnesses into open codes (diagonal
complements, closed-set codes) and build the classical separations, always
self-checking their output at scale before returning it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .coding import pair, unpair
from .covers import CoverRelation, minimal_cover_search
from .foundations import EnumSet, FinSet
from .spaces import (
    DualDescriptionMismatch,
    OpenCode,
    SpaceBase,
    ValidationReport,
    constant_code,
    fold_witness,
    point_masks,
    staged_code,
)


@dataclass(frozen=True)
class DiscreteWitness:
    """d(x) is an index with U_{d(x)} = {x}."""

    d: Callable[[int], int]


@dataclass(frozen=True)
class HausdorffWitness:
    """h0/h1 name disjoint basic sets around distinct points."""

    h0: Callable[[int, int], int]
    h1: Callable[[int, int], int]


@dataclass(frozen=True)
class ClosedSet:
    """Effectively closed: a decidable predicate plus a code for the open
    complement."""

    member: Callable[[int], bool]
    complement_code: OpenCode


def validate_discrete_witness(space: SpaceBase, w: DiscreteWitness,
                              point_bound: int) -> ValidationReport:
    report = ValidationReport(subject=f"discrete({space.name})",
                              bounds={"points": point_bound})
    pts = space.points(point_bound)
    for x in pts:
        i = w.d(x)
        if not space.index_member(i):
            report.add("index", point=x, i=i)
            continue
        if not space.basic_member(x, i):
            report.add("membership", point=x, i=i)
        for y in pts:
            if y != x and space.basic_member(y, i):
                report.add("not-singleton", point=x, i=i, other=y)
                break
    return report


def validate_hausdorff_witness(space: SpaceBase, w: HausdorffWitness,
                               point_bound: int) -> ValidationReport:
    report = ValidationReport(subject=f"hausdorff({space.name})",
                              bounds={"points": point_bound})
    pts = space.points(point_bound)
    for x0 in pts:
        for x1 in pts:
            if x0 == x1:
                continue
            i0, i1 = w.h0(x0, x1), w.h1(x0, x1)
            if not (space.index_member(i0) and space.index_member(i1)):
                report.add("index", x0=x0, x1=x1, i0=i0, i1=i1)
                continue
            if not space.basic_member(x0, i0):
                report.add("membership", point=x0, i=i0, x1=x1)
            if not space.basic_member(x1, i1):
                report.add("membership", point=x1, i=i1, x0=x0)
            clash = next((y for y in pts if space.basic_member(y, i0)
                          and space.basic_member(y, i1)), None)
            if clash is not None:
                report.add("overlap", x0=x0, x1=x1, i0=i0, i1=i1, at=clash)
    return report


def discrete_to_hausdorff(w: DiscreteWitness) -> HausdorffWitness:
    """Singleton sets separate; the valid direction of the equivalence."""
    return HausdorffWitness(h0=lambda x0, x1: w.d(x0),
                            h1=lambda x0, x1: w.d(x1))


def diagonal_code_from_hausdorff(space: SpaceBase,
                                 w: HausdorffWitness) -> OpenCode:
    """Open code on the square whose rectangles exhaust the off-diagonal:
    stage s emits the witness rectangle of every distinct pair of scale-s
    points."""

    def at(s: int) -> FinSet:
        pts = space.points(s)
        out = set()
        for x0 in pts:
            for x1 in pts:
                if x0 != x1:
                    out.add(pair(w.h0(x0, x1), w.h1(x0, x1)))
        return FinSet.of(out)

    return OpenCode(EnumSet(at, note=f"off-diagonal({space.name})"),
                    note=f"off-diagonal({space.name})")


def hausdorff_from_diagonal_code(
    space: SpaceBase,
    code: OpenCode,
    point_bound: int,
    stage_bound: int,
) -> HausdorffWitness:
    """Separating witness recovered from an off-diagonal code.

    The code is first validated at scale: no visible rectangle may touch the
    diagonal, and every distinct pair of scale points must be caught by some
    visible rectangle.  The witness then searches stages upward and takes the
    first catching rectangle, so it is total on scale pairs.
    """
    pts = space.points(point_bound)
    final = code.stage(stage_bound)
    for c in final:
        i0, i1 = unpair(c)
        for x in pts:
            if space.basic_member(x, i0) and space.basic_member(x, i1):
                raise ValueError(
                    f"rectangle {(i0, i1)} touches the diagonal at {x}")
    table: dict[tuple[int, int], tuple[int, int]] = {}
    seen: set[int] = set()
    for s in range(stage_bound + 1):
        new = [c for c in code.stage(s) if c not in seen]
        if not new:
            continue
        seen.update(new)
        for c in new:
            i0, i1 = unpair(c)
            left = [x for x in pts if space.basic_member(x, i0)]
            right = [x for x in pts if space.basic_member(x, i1)]
            for x0 in left:
                for x1 in right:
                    if x0 != x1 and (x0, x1) not in table:
                        table[(x0, x1)] = (i0, i1)
        if len(table) == len(pts) * (len(pts) - 1):
            break
    missing = [(a, b) for a in pts for b in pts
               if a != b and (a, b) not in table]
    if missing:
        raise ValueError(
            f"off-diagonal code misses pairs at bound: {missing[:3]}")

    def h0(x0: int, x1: int) -> int:
        return table[(x0, x1)][0]

    def h1(x0: int, x1: int) -> int:
        return table[(x0, x1)][1]

    return HausdorffWitness(h0=h0, h1=h1)


def compact_subspace_closed_code(
    space: SpaceBase,
    w: HausdorffWitness,
    part: Callable[[int], bool],
    part_relation: CoverRelation,
    point_bound: int,
    max_size: int = 6,
) -> OpenCode:
    """Open code for the complement of a compact part of a separated space.

    For each outside point, finitely many inside points are chosen whose
    h0-sets cover the part (minimal-first, certified by the part's cover
    relation); folding the matching h1-sets gives one basic set around the
    outside point avoiding the part.  The code enumerates those by stage.
    """
    pts = space.points(point_bound)
    inside = [x for x in pts if part(x)]
    outside = [x for x in pts if not part(x)]

    chosen_index: dict[int, int] = {}
    for x1 in outside:
        sets = [(x0, w.h0(x0, x1)) for x0 in inside]
        masks = point_masks(space, inside, [i for _, i in sets])
        items = [(x0, masks[i]) for x0, i in sets]
        target = (1 << len(inside)) - 1
        picked = minimal_cover_search(target, items, max_size)
        if picked is None:
            raise ValueError(f"no finite separating family for {x1} at scale")
        fam = FinSet.of(w.h0(x0, x1) for x0 in picked)
        if not part_relation.decide(fam).covers:
            raise DualDescriptionMismatch(
                f"scale cover of the part around {x1} rejected by its "
                f"cover relation")
        idx = fold_witness(space, x1, [w.h1(x0, x1) for x0 in picked])
        for y in inside:
            if space.basic_member(y, idx):
                raise DualDescriptionMismatch(
                    f"separating set around {x1} still meets the part at {y}")
        chosen_index[x1] = idx

    def at(s: int) -> FinSet:
        return FinSet.of(chosen_index[x] for x in outside if x <= s)

    return OpenCode(EnumSet(at, note=f"closed-complement({space.name})"),
                    note=f"closed-complement({space.name})")


@dataclass(frozen=True)
class Separation:
    """Two verified disjoint open codes around the two inputs."""

    first: OpenCode
    second: OpenCode
    bounds: dict


def _verify_separation(space, members0, members1, code0, code1, stage, pts):
    vis0 = code0.stage(stage)
    vis1 = code1.stage(stage)

    def in_union(x: int, vis: FinSet) -> bool:
        return any(space.basic_member(x, i) for i in vis)

    for x in members0:
        if not in_union(x, vis0):
            raise DualDescriptionMismatch(f"first side misses {x}")
    for x in members1:
        if not in_union(x, vis1):
            raise DualDescriptionMismatch(f"second side misses {x}")
    for x in pts:
        if in_union(x, vis0) and in_union(x, vis1):
            raise DualDescriptionMismatch(f"separation overlaps at {x}")


def regular_separation(
    space: SpaceBase,
    w: HausdorffWitness,
    closed: ClosedSet,
    x1: int,
    point_bound: int,
    stage_bound: int,
    max_size: int = 6,
) -> Separation:
    """Disjoint opens around a compact closed part and an outside point."""
    if closed.member(x1):
        raise ValueError(f"{x1} lies in the closed part")
    pts = space.points(point_bound)
    inside = [x for x in pts if closed.member(x)]
    sets = [(x0, w.h0(x0, x1)) for x0 in inside]
    masks = point_masks(space, inside, [i for _, i in sets])
    items = [(x0, masks[i]) for x0, i in sets]
    picked = minimal_cover_search((1 << len(inside)) - 1, items, max_size)
    if picked is None:
        raise ValueError(f"no finite separating family for {x1} at scale")
    first = FinSet.of(w.h0(x0, x1) for x0 in picked)
    second_idx = fold_witness(space, x1, [w.h1(x0, x1) for x0 in picked])
    code0 = constant_code(first, note="around-part")
    code1 = constant_code([second_idx], note="around-point")
    _verify_separation(space, inside, [x1], code0, code1, stage_bound, pts)
    return Separation(first=code0, second=code1,
                      bounds={"points": point_bound, "stages": stage_bound})


def normal_separation(
    space: SpaceBase,
    w: HausdorffWitness,
    first_part: Callable[[int], bool],
    second_part: Callable[[int], bool],
    point_bound: int,
    stage_bound: int,
    max_size: int = 6,
    sigma2: bool = False,
    index_bound: int | None = None,
) -> Separation:
    """Disjoint opens around two disjoint closed parts of a compact
    separated space.

    The effective route runs the point-vs-part separation for every point of
    the second part, covers the second part by finitely many of the returned
    point sets, and intersects the matching part sets; the intersection is
    re-coded one basic set per point through the witness fold.  With
    sigma2=True the per-point step instead searches raw index/bundle pairs
    (a basic set around the point plus a finite family covering the first
    part and avoiding it), the shape of the limit description.
    """
    pts = space.points(point_bound)
    inside0 = [x for x in pts if first_part(x)]
    inside1 = [x for x in pts if second_part(x)]
    if set(inside0) & set(inside1):
        raise ValueError("parts overlap at scale")
    all_idx = None
    if sigma2:
        all_idx = space.indices(index_bound if index_bound is not None
                                else point_bound)

    around_point: dict[int, int] = {}
    around_part: dict[int, FinSet] = {}
    for x1 in inside1:
        if sigma2:
            got = _sigma2_point_separation(space, x1, inside0, pts, all_idx,
                                           max_size)
        else:
            got = _effective_point_separation(space, w, x1, inside0, max_size)
        around_point[x1], around_part[x1] = got

    masks = point_masks(space, inside1,
                        {around_point[x] for x in inside1})
    items = [(x, masks[around_point[x]]) for x in inside1]
    picked = minimal_cover_search((1 << len(inside1)) - 1, items, max_size)
    if picked is None:
        raise ValueError("no finite cover of the second part at scale")

    second_fam = FinSet.of(around_point[x] for x in picked)
    part_fams = [around_part[x] for x in picked]

    def in_intersection(y: int) -> bool:
        return all(any(space.basic_member(y, i) for i in fam)
                   for fam in part_fams)

    folded: dict[int, int] = {}
    for y in inside0:
        if not in_intersection(y):
            raise DualDescriptionMismatch(
                f"first part escapes its own separation at {y}")
    for y in pts:
        if not in_intersection(y):
            continue
        per_fam = []
        for fam in part_fams:
            per_fam.append(next(i for i in fam
                                if space.basic_member(y, i)))
        folded[y] = fold_witness(space, y, per_fam)

    stages = [FinSet.of(folded[y] for y in folded if y <= s)
              for s in range(point_bound + 1)]
    code0 = staged_code(stages, note="around-first-part")
    code1 = constant_code(second_fam, note="around-second-part")
    _verify_separation(space, inside0, inside1, code0, code1, stage_bound,
                       pts)
    return Separation(first=code0, second=code1,
                      bounds={"points": point_bound, "stages": stage_bound,
                              "sigma2": sigma2})


def _effective_point_separation(space, w, x1, inside0, max_size):
    """One basic set around x1 plus a finite h0-family covering the part and
    missing it; the Hausdorff-witness route."""
    sets = [(x0, w.h0(x0, x1)) for x0 in inside0]
    masks = point_masks(space, inside0, [i for _, i in sets])
    items = [(x0, masks[i]) for x0, i in sets]
    picked = minimal_cover_search((1 << len(inside0)) - 1, items, max_size)
    if picked is None:
        raise ValueError(f"no finite separating family for {x1} at scale")
    fam = FinSet.of(w.h0(x0, x1) for x0 in picked)
    idx = fold_witness(space, x1, [w.h1(x0, x1) for x0 in picked])
    return idx, fam


def _sigma2_point_separation(space, x1, inside0, pts, all_idx, max_size):
    """Search basic sets around x1 and visible families over the part that
    avoid them; the limit-description route, evaluated at bound."""
    part_masks = point_masks(space, inside0, all_idx)
    full_masks = point_masks(space, pts, all_idx)
    target = (1 << len(inside0)) - 1
    for j in sorted(all_idx):
        if not space.basic_member(x1, j):
            continue
        # disjointness from U_j over every scale point, not just the part
        avoiders = [(i, part_masks[i]) for i in all_idx
                    if full_masks[i] & full_masks[j] == 0]
        picked = minimal_cover_search(target, avoiders, max_size)
        if picked is not None:
            return j, picked
    raise ValueError(f"no separated basic set around {x1} at bound")
