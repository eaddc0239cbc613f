"""Finite cover relations, subcover searches and accumulation points.

A cover relation answers "does this finite set of indices cover the space",
either exactly (EXACT, oracle-backed or finite at scale) or up to the run
bounds (BOUNDED).  Searches that extract finite subcovers enumerate candidate
index sets in (size, max index, lex) order, so results are deterministic and
minimal-first.  Where a question has both a positive and a negative
description, both are evaluated and a disagreement raises instead of being
resolved silently.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product as iproduct
from typing import Callable, Iterator, Sequence

from .coding import pair, unpair
from .foundations import FinSet, StagePredicate
from .spaces import (
    DualDescriptionMismatch,
    OpenCode,
    SpaceBase,
    Subbase,
    fold_witness,
    point_masks,
    product as space_product,
)


class Exactness(Enum):
    EXACT = "exact"
    BOUNDED = "bounded"


class CoverStatus(Enum):
    COVERS = "covers"
    NOT_COVERS = "not-covers"
    UNKNOWN = "unknown-at-bound"


@dataclass(frozen=True)
class CoverDecision:
    status: CoverStatus
    witness: int | None = None
    detail: str = ""

    @property
    def covers(self) -> bool:
        return self.status is CoverStatus.COVERS


COVERS = CoverDecision(CoverStatus.COVERS)


def not_covers(witness: int | None = None, detail: str = "") -> CoverDecision:
    return CoverDecision(CoverStatus.NOT_COVERS, witness=witness,
                         detail=detail)


def unknown(detail: str = "") -> CoverDecision:
    return CoverDecision(CoverStatus.UNKNOWN, detail=detail)


@dataclass(frozen=True)
class CoverRelation:
    decide: Callable[[FinSet], CoverDecision]
    exactness: Exactness
    name: str = ""


def memoized(decide: Callable[[FinSet], CoverDecision]
             ) -> Callable[[FinSet], CoverDecision]:
    cache: dict[FinSet, CoverDecision] = {}

    def wrapped(t: FinSet) -> CoverDecision:
        got = cache.get(t)
        if got is None:
            got = decide(t)
            cache[t] = got
        return got

    return wrapped


@dataclass(frozen=True)
class SubcoverCertificate:
    """A finite index set together with the bounds it was verified at."""

    chosen: FinSet
    bounds: dict
    verified: bool
    method: str = ""
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "indices": list(self.chosen),
            "bounds": dict(self.bounds),
            "verified": self.verified,
        }
        if self.method:
            out["method"] = self.method
        if self.extra:
            out["extra"] = self.extra
        return out


@dataclass(frozen=True)
class BoundedUnknown:
    reason: str
    bounds: dict

    def to_json(self) -> dict:
        return {"unknown": self.reason, "bounds": dict(self.bounds)}


@dataclass(frozen=True)
class FailurePoint:
    point: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"failure_point": self.point, "detail": self.detail}


def cover_check_bruteforce(space: SpaceBase, t: FinSet,
                           point_bound: int) -> CoverDecision:
    """Exhaustive check over the scale points; witness is the least uncovered
    point."""
    for x in space.points(point_bound):
        if not any(space.basic_member(x, i) for i in t):
            return not_covers(witness=x)
    return COVERS


def brute_force_relation(space: SpaceBase, point_bound: int,
                         exactness: Exactness = Exactness.BOUNDED,
                         name: str = "") -> CoverRelation:
    """Relation backed by point enumeration.  Mark EXACT only when the scale
    points are the whole space."""
    return CoverRelation(
        decide=memoized(lambda t: cover_check_bruteforce(space, t,
                                                         point_bound)),
        exactness=exactness,
        name=name or f"bruteforce({space.name})",
    )


def iter_index_families(pool: Sequence[int], max_size: int,
                        include_empty: bool = True) -> Iterator[FinSet]:
    """Finite subsets of the pool in (size, max element, lex) order."""
    items = sorted(set(pool))
    if include_empty:
        yield FinSet()
    for size in range(1, max_size + 1):
        for top_pos in range(size - 1, len(items)):
            head = items[top_pos]
            for combo in combinations(items[:top_pos], size - 1):
                yield FinSet(combo + (head,))


def minimal_cover_search(
    target_mask: int,
    items: Sequence[tuple[int, int]],
    max_size: int,
    budget: int = 200_000,
) -> FinSet | None:
    """First index set (in (size, max, lex) order) whose masks cover the
    target.  Indices sharing a mask are represented by the least one, which
    provably returns the same first certificate as the raw enumeration.
    Returns None when the pool cannot cover or the budget runs out.
    """
    if target_mask == 0:
        return FinSet()
    seen_masks: dict[int, int] = {}
    for idx, mask in sorted(items):
        useful = mask & target_mask
        if not useful:
            continue
        if useful not in seen_masks:
            seen_masks[useful] = idx
    reps = sorted((idx, m) for m, idx in seen_masks.items())
    total = 0
    for m in seen_masks:
        total |= m
    if total & target_mask != target_mask:
        return None
    spent = 0
    for size in range(1, max_size + 1):
        for top_pos in range(size - 1, len(reps)):
            head_idx, head_mask = reps[top_pos]
            for combo in combinations(reps[:top_pos], size - 1):
                spent += 1
                if spent > budget:
                    return None
                got = head_mask
                for _, m in combo:
                    got |= m
                if got & target_mask == target_mask:
                    return FinSet.of([head_idx] + [i for i, _ in combo])
    return None


def lift_cover_relation_to_closure(base: CoverRelation,
                                   name: str = "") -> CoverRelation:
    """Cover relation for finite-intersection families.

    A family of coded index sets covers exactly when every choice tuple
    (one index per set) covers in the base relation; a family containing the
    empty set covers vacuously (the empty intersection is the whole space).
    A failing tuple's witness point also escapes the closure family's union,
    so it is passed through.
    """

    def decide(t: FinSet) -> CoverDecision:
        families = [FinSet.decode(code) for code in t]
        pending = None
        for choice in iproduct(*[list(f) for f in families]):
            got = base.decide(FinSet.of(choice))
            if got.status is CoverStatus.NOT_COVERS:
                return not_covers(witness=got.witness,
                                  detail=f"choice tuple {choice}")
            if got.status is CoverStatus.UNKNOWN and pending is None:
                pending = got
        if pending is not None:
            return unknown(detail=f"lifted: {pending.detail}")
        return COVERS

    return CoverRelation(
        decide=memoized(decide),
        exactness=base.exactness,
        name=name or f"closure({base.name})",
    )


def image_cover_relation(
    base: CoverRelation,
    f: Callable[[int], int],
    phi: Callable[[int, int], int],
    dom: SpaceBase,
    cod: SpaceBase,
    point_bound: int,
    exactness: Exactness = Exactness.BOUNDED,
) -> CoverRelation:
    """Cover relation for the image space of a witnessed surjection.

    The positive description pulls a candidate cover of the domain out of the
    continuity witness (cover relations are monotone, so the full pulled-back
    index set is the canonical candidate); the negative description is brute
    force over the image points.  The two must agree where both resolve.
    """
    dom_pts = dom.points(point_bound)

    def decide(t: FinSet) -> CoverDecision:
        pulled = set()
        for x in dom_pts:
            for j in t:
                if cod.basic_member(f(x), j):
                    pulled.add(phi(x, j))
        sigma = base.decide(FinSet.of(pulled))
        pi = cover_check_bruteforce(cod, t, point_bound)
        if sigma.covers and pi.covers:
            return COVERS
        if sigma.covers and not pi.covers:
            raise DualDescriptionMismatch(
                f"{cod.name}: pulled-back cover certified but image point "
                f"{pi.witness} is uncovered (bad witness)")
        if not pi.covers:
            return pi
        raise DualDescriptionMismatch(
            f"{cod.name}: image looks covered at scale but no pulled-back "
            f"certificate exists at bound (insufficient bound or bad witness)")

    return CoverRelation(decide=memoized(decide), exactness=exactness,
                         name=f"image({base.name})")


def closed_subspace_subcover(
    space: SpaceBase,
    cover_code: OpenCode,
    complement_code: OpenCode,
    point_bound: int,
    stage_bound: int,
    max_size: int = 8,
) -> SubcoverCertificate | BoundedUnknown:
    """Finite subcover of a closed subspace from a cover of it.

    The closed set is the scale complement of the second code's union.  Both
    codes together cover the whole space, a finite subcover of the space is
    extracted minimal-first, and its intersection with the first code is the
    certificate for the closed part.
    """
    bounds = {"points": point_bound, "stages": stage_bound}
    visible0 = cover_code.stage(stage_bound)
    visible1 = complement_code.stage(stage_bound)
    pts = space.points(point_bound)
    masks = point_masks(space, pts, set(visible0) | set(visible1))

    outside = 0
    for i in visible1:
        outside |= masks[i]
    closed_mask = (1 << len(pts)) - 1 & ~outside

    all_mask = (1 << len(pts)) - 1
    chosen = minimal_cover_search(all_mask, list(masks.items()), max_size)
    if chosen is None:
        return BoundedUnknown("no finite subcover of the whole space at "
                              "bound", bounds)
    part = FinSet.of(i for i in chosen if i in visible0)
    got = 0
    for i in part:
        got |= masks[i]
    if closed_mask & ~got:
        # The part of the subcover drawn from the closed set's cover must
        # already cover it; anything else means the complement code leaks.
        missing = closed_mask & ~got
        x = pts[(missing & -missing).bit_length() - 1]
        raise DualDescriptionMismatch(
            f"{space.name}: closed point {x} covered only through the "
            f"complement code")
    return SubcoverCertificate(chosen=part, bounds=bounds, verified=True,
                               method="closed-subspace")


def closed_subspace_cover_relation(
    space: SpaceBase,
    base: CoverRelation,
    complement_code: OpenCode,
    point_bound: int,
    stage_bound: int,
) -> CoverRelation:
    """Relative cover relation for the scale complement of an open code.

    Positive side: the family covers the closed part when, padded with the
    visible complement indices, it covers the whole space.  Negative side:
    brute force over the closed scale points.  Mismatches in the impossible
    direction raise; a positive brute-force answer the padded relation cannot
    certify stays UNKNOWN.
    """
    visible1 = complement_code.stage(stage_bound)
    pts = space.points(point_bound)
    closed_pts = [x for x in pts
                  if not any(space.basic_member(x, i) for i in visible1)]

    def decide(t: FinSet) -> CoverDecision:
        sigma = base.decide(t.union(visible1))
        pi_witness = None
        for x in closed_pts:
            if not any(space.basic_member(x, i) for i in t):
                pi_witness = x
                break
        if sigma.covers:
            if pi_witness is not None:
                raise DualDescriptionMismatch(
                    f"{space.name}: padded cover certified but closed point "
                    f"{pi_witness} uncovered")
            return COVERS
        if pi_witness is not None:
            return not_covers(witness=pi_witness)
        return unknown("closed part covered at scale but the padded family "
                       "has no certificate at bound")

    return CoverRelation(decide=memoized(decide), exactness=base.exactness,
                         name=f"closed-rel({base.name})")


def cofinite_point_subcover(
    space: SpaceBase,
    selector: StagePredicate,
    x0: int,
    point_bound: int,
    index_bound: int,
    stage_bound: int,
) -> SubcoverCertificate | BoundedUnknown:
    """Finite subcover for a space where a chosen point's neighborhoods are
    all cofinite.

    Picks a selected basic set around x0, then covers its finite scale
    complement pointwise from the selector.  The cofiniteness precondition is
    checked on the top quarter of the scale points and violations raise.
    """
    bounds = {"points": point_bound, "indices": index_bound,
              "stages": stage_bound}
    pts = space.points(point_bound)
    idxs = space.indices(index_bound)
    if x0 not in pts:
        raise ValueError(f"{x0} is not a scale point of {space.name}")
    tail = pts[-(max(1, len(pts) // 4)):]
    for i in idxs:
        if space.basic_member(x0, i):
            if not all(space.basic_member(y, i) for y in tail):
                raise ValueError(
                    f"neighborhood {i} of {x0} is not cofinite at scale")

    def selected(i: int) -> bool:
        return selector.holds(i, stage_bound)

    i0 = next((i for i in idxs if selected(i) and space.basic_member(x0, i)),
              None)
    if i0 is None:
        return BoundedUnknown("no selected neighborhood of the anchor point "
                              "at bound", bounds)
    chosen = [i0]
    for x in pts:
        if space.basic_member(x, i0):
            continue
        ix = next((i for i in idxs
                   if selected(i) and space.basic_member(x, i)), None)
        if ix is None:
            return BoundedUnknown(f"left-over point {x} has no selected "
                                  f"neighborhood at bound", bounds)
        chosen.append(ix)
    cert = FinSet.of(chosen)
    check = cover_check_bruteforce(space, cert, point_bound)
    return SubcoverCertificate(chosen=cert, bounds=bounds,
                               verified=check.covers, method="cofinite-point")


def _minimal_family_covering(
    pool: Sequence[tuple[int, int]],
    right: CoverRelation,
    max_size: int,
    budget: int = 20_000,
) -> list[tuple[int, int]] | None:
    """Least (size, max, lex) subfamily of (i, j) pairs whose j-parts the
    right relation accepts.  Pairs sharing a j are represented by the least
    pair.  None when the budget runs out or no subfamily works."""
    by_j: dict[int, tuple[int, int]] = {}
    for p in sorted(pool):
        if p[1] not in by_j:
            by_j[p[1]] = p
    reps = sorted(by_j.values())
    spent = 0
    for size in range(1, min(max_size, len(reps)) + 1):
        for top_pos in range(size - 1, len(reps)):
            for combo in combinations(reps[:top_pos], size - 1):
                spent += 1
                if spent > budget:
                    return None
                fam = list(combo) + [reps[top_pos]]
                got = right.decide(FinSet.of(j for _, j in fam))
                if got.covers:
                    return fam
    return None


def loeb_product_subcover(
    left: SpaceBase,
    right: SpaceBase,
    right_relation: CoverRelation,
    pair_code: OpenCode,
    point_bound: int,
    stage_bound: int,
    search_bound: int = 64,
    max_size: int = 6,
    sigma2: bool = False,
) -> SubcoverCertificate | FailurePoint | BoundedUnknown:
    """Finite subcover of a rectangle cover of a product, or the point on the
    left whose fiber resists.

    Per left point, a finite bundle of visible rectangles is sought whose
    right parts cover the right space (the full visible fiber is tried first:
    cover relations are monotone, so if it fails, FAILURE-POINT is the
    verdict at this bound).  The bundle intersections are folded into one
    basic set per point, a finite subcover on the left is extracted, and the
    union of the chosen bundles is verified on the product by brute force.
    With sigma2=True the per-point bundles are indexed by left basic sets
    instead: a basic set qualifies when some visible finite bundle traps it
    under the rectangle lefts while the rights cover.
    """
    bounds = {"points": point_bound, "stages": stage_bound,
              "search": search_bound, "sigma2": sigma2}
    pairs = [unpair(c) for c in pair_code.stage(stage_bound)]
    pts = left.points(point_bound)

    if sigma2:
        folded = _loeb_sigma2_bundles(left, right_relation, pairs, pts,
                                      search_bound, max_size)
    else:
        folded = []
        for x in pts:
            fiber = [(i, j) for (i, j) in pairs if left.basic_member(x, i)]
            full = right_relation.decide(FinSet.of(j for _, j in fiber))
            if not full.covers:
                return FailurePoint(
                    x, detail="no finite visible bundle over this point "
                              "covers the right space")
            bundle = _minimal_family_covering(fiber, right_relation, max_size)
            if bundle is None:
                return BoundedUnknown(
                    f"bundle search for point {x} ran out of budget", bounds)
            lefts = []
            for i, _ in bundle:
                if i not in lefts:
                    lefts.append(i)
            folded.append((x, fold_witness(left, x, lefts), bundle))

    if sigma2 and isinstance(folded, FailurePoint):
        return folded

    items = []
    mask_lookup: dict[int, list] = {}
    for pos, (x, idx, bundle) in enumerate(folded):
        m = 0
        for q, y in enumerate(pts):
            if left.basic_member(y, idx):
                m |= 1 << q
        items.append((pos, m))
        mask_lookup[pos] = bundle
    target = (1 << len(pts)) - 1
    chosen = minimal_cover_search(target, items, max_size=max(max_size, 8))
    if chosen is None:
        return BoundedUnknown("left-side subcover search failed at bound",
                              bounds)
    cert_pairs = sorted({pair(i, j)
                         for pos in chosen for i, j in mask_lookup[pos]})
    prod = space_product(left, right)
    check = cover_check_bruteforce(prod, FinSet.of(cert_pairs), point_bound)
    if not check.covers:
        raise DualDescriptionMismatch(
            f"loeb certificate misses product point {check.witness}")
    support_key = "left_sets" if sigma2 else "left_points"
    return SubcoverCertificate(
        chosen=FinSet.of(cert_pairs), bounds=bounds, verified=True,
        method="loeb-sigma2" if sigma2 else "loeb",
        extra={support_key: [folded[pos][0] for pos in chosen]},
    )


def _loeb_sigma2_bundles(left, right_relation, pairs, pts, search_bound,
                         max_size):
    """Bundles per qualifying left basic set; returns the folded list or a
    FailurePoint when some scale point sits in no qualifying set."""
    folded = []
    for i0 in left.indices(search_bound):
        i0_pts = [x for x in pts if left.basic_member(x, i0)]
        if not i0_pts:
            continue
        trapped = []
        for (i, j) in pairs:
            if all(left.basic_member(x, i) for x in i0_pts):
                trapped.append((i, j))
        if not right_relation.decide(FinSet.of(j for _, j in trapped)).covers:
            continue
        bundle = _minimal_family_covering(trapped, right_relation, max_size)
        if bundle is None:
            continue
        folded.append((i0, i0, bundle))
    covered = set()
    for i0, _, _ in folded:
        covered.update(x for x in pts if left.basic_member(x, i0))
    for x in pts:
        if x not in covered:
            return FailurePoint(
                x, detail="no qualifying basic set contains this point")
    return folded


def product_cover_relation(
    left_relation: CoverRelation,
    right_relation: CoverRelation,
    left: SpaceBase,
    right: SpaceBase,
    point_bound: int,
    exactness: Exactness = Exactness.BOUNDED,
) -> CoverRelation:
    """Cover relation for rectangle families on a product.

    Realized by sectioning: scale points of the left factor fall into
    signature classes by which rectangle lefts contain them, and the family
    covers exactly when each class's right parts cover the right factor.  A
    full rectangle (both parts certified alone) short-circuits.
    """
    pts = left.points(point_bound)

    def decide(t: FinSet) -> CoverDecision:
        rects = [unpair(c) for c in t]
        for (i, j) in rects:
            if left_relation.decide(FinSet.of([i])).covers and \
                    right_relation.decide(FinSet.of([j])).covers:
                return COVERS
        seen: dict[frozenset, int] = {}
        for x in pts:
            sig = frozenset(p for p, (i, _) in enumerate(rects)
                            if left.basic_member(x, i))
            if sig not in seen:
                seen[sig] = x
        pending = None
        for sig, x in sorted(seen.items(), key=lambda kv: kv[1]):
            fam = FinSet.of(rects[p][1] for p in sig)
            got = right_relation.decide(fam)
            if got.status is CoverStatus.NOT_COVERS:
                y = got.witness
                w = pair(x, y) if y is not None else None
                return not_covers(witness=w,
                                  detail=f"section at left point {x}")
            if got.status is CoverStatus.UNKNOWN and pending is None:
                pending = got
        if pending is not None:
            return unknown(detail=f"section: {pending.detail}")
        return COVERS

    return CoverRelation(decide=memoized(decide), exactness=exactness,
                         name=f"product({left_relation.name},"
                              f"{right_relation.name})")


@dataclass(frozen=True)
class AlexanderCertificate:
    height: int
    families: tuple[FinSet, ...]
    verified: bool

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "families": [list(f) for f in self.families],
            "verified": self.verified,
        }


@dataclass(frozen=True)
class InfiniteBranch:
    prefix: tuple[int, ...]

    def to_json(self) -> dict:
        return {"infinite_branch": list(self.prefix)}


def alexander_wkl_subcover(
    sb: Subbase,
    relation: CoverRelation,
    families: Sequence[FinSet] | Callable[[int], FinSet],
    depth_bound: int,
    point_bound: int,
) -> AlexanderCertificate | InfiniteBranch | BoundedUnknown:
    """Finite prefix of a subbase-family sequence that covers, via the tree
    of non-covering choice tuples.

    The tree holds tuples picking one index from each family whose index set
    the relation rejects.  If the deterministic depth-first walk survives to
    the depth bound, that prefix is reported as a live branch.  If the tree
    dies out at height h, every length-(h+1) choice tuple covers, so the
    first h+1 families cover the space; the certificate is re-verified by
    brute force over the scale points.
    """
    if callable(families):
        fam_at = families
        fam_len = depth_bound + 1
    else:
        fams = list(families)
        fam_at = lambda n: fams[n]
        fam_len = len(fams)

    root = relation.decide(FinSet())
    if root.covers:
        return AlexanderCertificate(height=0, families=(), verified=True)

    max_depth = 0
    stack: list[tuple[tuple[int, ...], FinSet]] = [((), FinSet())]
    while stack:
        prefix, used = stack.pop()
        depth = len(prefix)
        max_depth = max(max_depth, depth)
        if depth >= depth_bound:
            return InfiniteBranch(prefix=prefix)
        if depth >= fam_len:
            return BoundedUnknown(
                "family list exhausted on a live branch",
                {"depth": depth, "families": fam_len})
        # Reversed push order keeps the walk leftmost-first.
        for i in sorted(fam_at(depth), reverse=True):
            grown = used.union(FinSet.of([i]))
            if not relation.decide(grown).covers:
                stack.append((prefix + (i,), grown))

    height = max_depth + 1
    chosen = tuple(fam_at(n) for n in range(height))
    ok = True
    for x in sb.points(point_bound):
        if not any(all(sb.member(x, i) for i in fam) for fam in chosen):
            ok = False
            break
    return AlexanderCertificate(height=height, families=chosen, verified=ok)


def accumulation_point_search(
    space: SpaceBase,
    seq: Sequence[int] | Callable[[int], int],
    point_bound: int,
    index_bound: int,
    stage_bound: int,
    window: int,
) -> int | None:
    """First scale point all of whose basic neighborhoods (indices at scale)
    catch the sequence at least `window` many times; None at bound."""
    term = seq if callable(seq) else seq.__getitem__
    values = [term(n) for n in range(stage_bound)]
    idxs = space.indices(index_bound)
    counts = {i: sum(1 for v in values if space.basic_member(v, i))
              for i in idxs}
    for x in space.points(point_bound):
        nbhd = [i for i in idxs if space.basic_member(x, i)]
        if nbhd and all(counts[i] >= window for i in nbhd):
            return x
    return None


def product_accumulation(
    left: SpaceBase,
    right: SpaceBase,
    seq: Sequence[int] | Callable[[int], int],
    point_bound: int,
    index_bound: int,
    stage_bound: int,
    window: int,
) -> int | None:
    """Accumulation pair for a sequence in a product: accumulate on the left
    coordinates, fold the found point's scale neighborhoods into one basic
    set, pass to the right the subsequence it traps, and accumulate there.
    Returns the coded pair or None at bound."""
    term = seq if callable(seq) else seq.__getitem__
    decoded = [unpair(term(n)) for n in range(stage_bound)]
    x = accumulation_point_search(left, [p[0] for p in decoded], point_bound,
                                  index_bound, stage_bound, window)
    if x is None:
        return None
    nbhd = [i for i in left.indices(index_bound) if left.basic_member(x, i)]
    trap = fold_witness(left, x, nbhd)
    tail = [b for (a, b) in decoded if left.basic_member(a, trap)]
    if len(tail) < window:
        return None
    y = accumulation_point_search(right, tail, point_bound, index_bound,
                                  len(tail), window)
    if y is None:
        return None
    return pair(x, y)
