"""Spaces presented by coded bases.

A space is a decidable set of coded points together with an indexed family of
basic open sets and a witness function k: whenever x lies in U_i and U_j,
U_{k(x,i,j)} is a basic set around x inside the intersection.  Open sets
beyond the basics are enumerable sets of indices (open codes).  All axioms are
checked at a finite scale: a point bound and an index search bound.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .coding import pair, unpair
from .foundations import EnumSet, FinSet, StagePredicate, is_finset_code


@dataclass(frozen=True)
class SpaceBase:
    """A coded base: point/index membership, basic membership and witness k.

    point_iter/index_iter produce the points and indices "at scale b"; the
    defaults filter 0..b through the membership predicates, and constructions
    whose codes grow faster than the underlying data (products, closures)
    override them.  witness_uniform declares that witness_k ignores its point
    argument, which lets the validator check the witness axiom per index pair
    instead of per (point, pair) triple.
    """

    name: str
    point_member: Callable[[int], bool]
    index_member: Callable[[int], bool]
    basic_member: Callable[[int, int], bool]
    witness_k: Callable[[int, int, int], int]
    point_iter: Callable[[int], list[int]] | None = None
    index_iter: Callable[[int], list[int]] | None = None
    witness_uniform: bool = False
    staged_member: Callable[[int, int, int], bool] | None = None

    def points(self, bound: int) -> list[int]:
        if self.point_iter is not None:
            return self.point_iter(bound)
        return [x for x in range(bound + 1) if self.point_member(x)]

    def indices(self, bound: int) -> list[int]:
        if self.index_iter is not None:
            return self.index_iter(bound)
        return [i for i in range(bound + 1) if self.index_member(i)]

    def renamed(self, name: str) -> "SpaceBase":
        return replace(self, name=name)


@dataclass(frozen=True)
class Subbase:
    """An indexed family of decidable sets, before closing under finite
    intersections."""

    name: str
    point_member: Callable[[int], bool]
    index_member: Callable[[int], bool]
    member: Callable[[int, int], bool]
    point_iter: Callable[[int], list[int]] | None = None
    index_iter: Callable[[int], list[int]] | None = None
    staged_member: Callable[[int, int, int], bool] | None = None

    def points(self, bound: int) -> list[int]:
        if self.point_iter is not None:
            return self.point_iter(bound)
        return [x for x in range(bound + 1) if self.point_member(x)]

    def indices(self, bound: int) -> list[int]:
        if self.index_iter is not None:
            return self.index_iter(bound)
        return [i for i in range(bound + 1) if self.index_member(i)]


@dataclass(frozen=True)
class OpenCode:
    """An open set: an enumerable set of base indices."""

    indices: EnumSet
    note: str = ""

    def stage(self, s: int) -> FinSet:
        return self.indices.stage(s)


@dataclass(frozen=True)
class ContinuityWitness:
    """phi(x, j) names a basic set around x inside the preimage of V_j."""

    phi: Callable[[int, int], int]


@dataclass
class ValidationReport:
    subject: str
    bounds: dict
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, **detail) -> None:
        self.violations.append({"kind": kind, **detail})

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "bounds": self.bounds,
            "ok": self.ok,
            "violations": self.violations,
        }


class DualDescriptionMismatch(Exception):
    """The positive and negative descriptions of the same question disagreed
    at the bound: a bad witness or an insufficient bound.  Never swallowed."""


def point_masks(space: SpaceBase, points: Sequence[int],
                indices: Iterable[int]) -> dict[int, int]:
    """Bitmask of each basic set over the given point list."""
    masks: dict[int, int] = {}
    for i in indices:
        m = 0
        for pos, x in enumerate(points):
            if space.basic_member(x, i):
                m |= 1 << pos
        masks[i] = m
    return masks


def _mask_of(space: SpaceBase, points: Sequence[int], masks: dict[int, int],
             i: int) -> int:
    got = masks.get(i)
    if got is None:
        got = 0
        for pos, x in enumerate(points):
            if space.basic_member(x, i):
                got |= 1 << pos
        masks[i] = got
    return got


def validate_base(space: SpaceBase, point_bound: int,
                  index_bound: int) -> ValidationReport:
    """Check the two base axioms at scale.

    Coverage: every point <= bound lies in some basic set with index in the
    search range.  Witness: for points x in U_i and U_j, k(x,i,j) names a
    valid index with x in U_k and U_k inside the intersection (checked over
    the scale points).
    """
    report = ValidationReport(
        subject=space.name,
        bounds={"points": point_bound, "indices": index_bound},
    )
    pts = space.points(point_bound)
    idxs = space.indices(index_bound)
    masks = point_masks(space, pts, idxs)

    covered = 0
    for m in masks.values():
        covered |= m
    for pos, x in enumerate(pts):
        if not covered >> pos & 1:
            report.add("coverage", point=x)

    if space.witness_uniform:
        _check_witness_uniform(space, pts, idxs, masks, report)
    else:
        _check_witness_pointwise(space, pts, idxs, masks, report)
    return report


def _check_witness_uniform(space, pts, idxs, masks, report) -> None:
    # k(x,i,j) does not depend on x, so the axiom at scale is the mask
    # equation U_k == U_i & U_j whenever the intersection is inhabited.
    probe = dict(masks)
    for i in idxs:
        for j in idxs:
            inter = masks[i] & masks[j]
            if not inter:
                continue
            x0 = pts[(inter & -inter).bit_length() - 1]
            k = space.witness_k(x0, i, j)
            if not space.index_member(k):
                report.add("witness-index", point=x0, i=i, j=j, k=k)
                continue
            mk = _mask_of(space, pts, probe, k)
            missing = inter & ~mk
            if missing:
                x = pts[(missing & -missing).bit_length() - 1]
                report.add("witness-membership", point=x, i=i, j=j, k=k)
            leaking = mk & ~inter
            if leaking:
                x = pts[(leaking & -leaking).bit_length() - 1]
                report.add("witness-subset", point=x, i=i, j=j, k=k)


def _check_witness_pointwise(space, pts, idxs, masks, report) -> None:
    probe = dict(masks)
    for pos, x in enumerate(pts):
        bit = 1 << pos
        around = [i for i in idxs if masks[i] & bit]
        for i in around:
            for j in around:
                inter = masks[i] & masks[j]
                k = space.witness_k(x, i, j)
                if not space.index_member(k):
                    report.add("witness-index", point=x, i=i, j=j, k=k)
                    continue
                mk = _mask_of(space, pts, probe, k)
                if not mk & bit:
                    report.add("witness-membership", point=x, i=i, j=j, k=k)
                if mk & ~inter:
                    bad = mk & ~inter
                    y = pts[(bad & -bad).bit_length() - 1]
                    report.add("witness-subset", point=y, i=i, j=j, k=k)


def discrete_space(n: int) -> SpaceBase:
    """n isolated points; U_i = {i}."""
    if n <= 0:
        raise ValueError("discrete space needs n >= 1")

    def member(x: int) -> bool:
        return 0 <= x < n

    return SpaceBase(
        name=f"discrete:{n}",
        point_member=member,
        index_member=member,
        basic_member=lambda x, i: x == i,
        witness_k=lambda x, i, j: i,
        witness_uniform=True,
    )


def subbase_closure(sb: Subbase, max_family_size: int = 3) -> SpaceBase:
    """Close a subbase under finite intersections.

    Indices of the closure are codes of finite sets of subbase indices; the
    empty set names the whole space.  The witness is the union of the two
    index sets.  max_family_size only limits which indices index_iter lists;
    membership accepts any valid coded family.
    """
    decode_cache: dict[int, FinSet] = {}

    def family(code: int) -> FinSet | None:
        fam = decode_cache.get(code)
        if fam is None:
            try:
                fam = FinSet.decode(code)
            except ValueError:
                return None
            decode_cache[code] = fam
        return fam

    def index_member(code: int) -> bool:
        fam = family(code)
        return fam is not None and all(sb.index_member(i) for i in fam)

    def basic_member(x: int, code: int) -> bool:
        fam = family(code)
        if fam is None:
            return False
        return sb.point_member(x) and all(sb.member(x, i) for i in fam)

    def index_iter(bound: int) -> list[int]:
        base = sb.indices(bound)
        out = [FinSet().encode()]
        for size in range(1, max_family_size + 1):
            for combo in combinations(base, size):
                out.append(FinSet(combo).encode())
        return out

    staged = None
    if sb.staged_member is not None:
        def staged(x: int, code: int, s: int) -> bool:
            fam = family(code)
            if fam is None:
                return False
            return sb.point_member(x) and all(
                sb.staged_member(x, i, s) for i in fam)

    return SpaceBase(
        name=f"closure({sb.name})",
        point_member=sb.point_member,
        index_member=index_member,
        basic_member=basic_member,
        witness_k=lambda x, s, t: family(s).union(family(t)).encode(),
        point_iter=sb.point_iter,
        index_iter=index_iter,
        witness_uniform=True,
        staged_member=staged,
    )


def subspace(space: SpaceBase, member: Callable[[int], bool],
             name: str | None = None) -> SpaceBase:
    """Restrict the points; indices and witness carry over unchanged."""

    def point_member(x: int) -> bool:
        return space.point_member(x) and member(x)

    def point_iter(bound: int) -> list[int]:
        return [x for x in space.points(bound) if member(x)]

    staged = None
    if space.staged_member is not None:
        def staged(x: int, i: int, s: int) -> bool:
            return member(x) and space.staged_member(x, i, s)

    return SpaceBase(
        name=name or f"subspace({space.name})",
        point_member=point_member,
        index_member=space.index_member,
        basic_member=lambda x, i: member(x) and space.basic_member(x, i),
        witness_k=space.witness_k,
        point_iter=point_iter,
        index_iter=space.index_iter,
        witness_uniform=space.witness_uniform,
        staged_member=staged,
    )


def product(a: SpaceBase, b: SpaceBase) -> SpaceBase:
    """Points are coded pairs, basics are coded rectangles, and the witness
    applies the factor witnesses coordinatewise."""

    def point_member(p: int) -> bool:
        x, y = unpair(p)
        return a.point_member(x) and b.point_member(y)

    def index_member(c: int) -> bool:
        i, j = unpair(c)
        return a.index_member(i) and b.index_member(j)

    def basic_member(p: int, c: int) -> bool:
        x, y = unpair(p)
        i, j = unpair(c)
        return a.basic_member(x, i) and b.basic_member(y, j)

    def witness(p: int, c: int, d: int) -> int:
        x, y = unpair(p)
        i0, j0 = unpair(c)
        i1, j1 = unpair(d)
        return pair(a.witness_k(x, i0, i1), b.witness_k(y, j0, j1))

    def point_iter(bound: int) -> list[int]:
        return sorted(pair(x, y)
                      for x in a.points(bound) for y in b.points(bound))

    def index_iter(bound: int) -> list[int]:
        return sorted(pair(i, j)
                      for i in a.indices(bound) for j in b.indices(bound))

    return SpaceBase(
        name=f"product({a.name},{b.name})",
        point_member=point_member,
        index_member=index_member,
        basic_member=basic_member,
        witness_k=witness,
        point_iter=point_iter,
        index_iter=index_iter,
        witness_uniform=a.witness_uniform and b.witness_uniform,
    )


def code_union_stage(space: SpaceBase, code: OpenCode, stage: int,
                     points: Sequence[int]) -> dict[int, int]:
    """Map point -> least stage <= `stage` at which the code's union reaches
    it; points never reached are absent."""
    reached: dict[int, int] = {}
    seen: set[int] = set()
    for s in range(stage + 1):
        new = [i for i in code.stage(s) if i not in seen]
        if not new:
            continue
        seen.update(new)
        for x in points:
            if x in reached:
                continue
            if any(space.basic_member(x, i) for i in new):
                reached[x] = s
    return reached


def effectively_open_check(
    space: SpaceBase,
    code: OpenCode,
    target: Callable[[int], bool],
    point_bound: int,
    stage_bound: int,
    assume_stabilized: bool | None = None,
) -> ValidationReport:
    """Compare the union of a code against a decidable target set at scale.

    A point visibly in the union but outside the target is always a
    violation.  A target point the union has not reached by the stage bound
    is a violation when the code is visibly finished (stages constant over
    the second half of the run, or assume_stabilized=True); otherwise the
    report stays clean and carries caveat=True plus the pending points.
    """
    pts = space.points(point_bound)
    reached = code_union_stage(space, code, stage_bound, pts)
    report = ValidationReport(
        subject=f"open-check({space.name})",
        bounds={"points": point_bound, "stages": stage_bound},
    )
    report.bounds["caveat"] = False

    for x in pts:
        if x in reached and not target(x):
            report.add("union-outside-target", point=x, stage=reached[x])

    missing = [x for x in pts if target(x) and x not in reached]
    if missing:
        if assume_stabilized is None:
            half = code.stage(stage_bound // 2)
            stabilized = half == code.stage(stage_bound)
        else:
            stabilized = assume_stabilized
        if stabilized:
            for x in missing:
                report.add("target-not-covered", point=x)
        else:
            report.bounds["caveat"] = True
            report.bounds["pending"] = missing
    report.bounds["stage_map"] = reached
    return report


def validate_continuity_witness(
    f: Callable[[int], int],
    w: ContinuityWitness,
    dom: SpaceBase,
    cod: SpaceBase,
    point_bound: int,
    index_bound: int,
) -> ValidationReport:
    """Check: f(x) in V_j implies x in U_{phi(x,j)} and U_{phi(x,j)} maps
    into V_j, over scale points and codomain indices."""
    report = ValidationReport(
        subject=f"continuity({dom.name}->{cod.name})",
        bounds={"points": point_bound, "indices": index_bound},
    )
    pts = dom.points(point_bound)
    for j in cod.indices(index_bound):
        for x in pts:
            if not cod.basic_member(f(x), j):
                continue
            i = w.phi(x, j)
            if not dom.index_member(i):
                report.add("phi-index", point=x, j=j, i=i)
                continue
            if not dom.basic_member(x, i):
                report.add("phi-membership", point=x, j=j, i=i)
            for y in pts:
                if dom.basic_member(y, i) and not cod.basic_member(f(y), j):
                    report.add("phi-subset", point=x, j=j, i=i, leak=y)
                    break
    return report


def preimage_open_code(
    f: Callable[[int], int],
    w: ContinuityWitness,
    dom: SpaceBase,
    cod: SpaceBase,
    code: OpenCode,
    point_bound: int,
    index_bound: int,
) -> OpenCode:
    """Open code for the preimage of an open code under a witnessed map.

    Stage s collects phi(x, j) for scale-s domain points and code indices
    visible at stage s with f(x) in V_j.  The witness is validated first.
    """
    check = validate_continuity_witness(f, w, dom, cod, point_bound,
                                        index_bound)
    if not check.ok:
        raise ValueError(
            f"continuity witness failed validation: {check.violations[:3]}")

    def at(s: int) -> FinSet:
        out = set()
        for x in dom.points(s):
            for j in code.stage(s):
                if cod.basic_member(f(x), j):
                    out.add(w.phi(x, j))
        return FinSet.of(out)

    return OpenCode(EnumSet(at, note=f"preimage({code.note})"),
                    note=f"preimage({code.note})")


def fold_witness(space: SpaceBase, x: int, idxs: Sequence[int]) -> int:
    """Fold several indices around x into one basic set inside the
    intersection, by repeated application of the witness axiom."""
    if not idxs:
        raise ValueError("fold_witness needs at least one index")
    acc = idxs[0]
    for i in idxs[1:]:
        acc = space.witness_k(x, acc, i)
    return acc


def constant_code(indices: Iterable[int], note: str = "") -> OpenCode:
    fs = FinSet.of(indices)
    return OpenCode(EnumSet(lambda s: fs, note=note), note=note)


def staged_code(stages: list[FinSet], note: str = "") -> OpenCode:
    from .foundations import enumset_from_stages
    return OpenCode(enumset_from_stages(stages, note=note), note=note)
