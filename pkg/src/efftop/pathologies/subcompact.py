"""Compact subbases whose closures are infinite discrete spaces.

Two constructions.  The first indexes subbase sets by bit strings against a
family of limit bits: the set at s holds |s| plus every point disagreeing
with s somewhere, so intersecting all strings of one length isolates that
length, yet reading any non-finitely-subcoverable cover back off recovers
the limit bits.  The second takes a binary tree with no infinite branch and
covers its dead-ends by "does not extend t" sets; off-path siblings
isolate each dead-end.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Sequence

from ..coding import decode_bits, encode_bits
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
from ..foundations import EnumSet, FinSet
from ..separation import DiscreteWitness
from ..spaces import SpaceBase, Subbase, subbase_closure
from .generics import LIMIT_IN_SECOND, LimitFamily


@dataclass(frozen=True)
class LimitSubbaseSpace:
    """String-indexed compact subbase over a family of limit bits."""

    family: LimitFamily
    subbase: Subbase
    space: SpaceBase
    subbase_relation: CoverRelation
    relation: CoverRelation
    limit_cover: EnumSet

    def singleton_index(self, n: int) -> int:
        """Closure index intersecting every string of length n; the result
        is exactly {n}.  Family size is 2**n, so keep n small."""
        if n > 8:
            raise ValueError("singleton family would hold 2**n strings")
        codes = [encode_bits(bits) for bits in iproduct((0, 1), repeat=n)]
        return FinSet.of(codes).encode()


def limit_subbase_space(F: LimitFamily) -> LimitSubbaseSpace:
    """Build the subbase, its closure, and the exact cover relation.

    A member string that is not a prefix of the limit bits has a cofinite
    set; a prefix only reaches its own length and the pre-settling stray
    points.  The relation collects a determination bound from lengths and
    settling indices, scans below it, and lets any non-prefix member absorb
    the tail.
    """
    if F.limit_arg != LIMIT_IN_SECOND:
        raise ValueError("this subbase needs limits in the second argument")

    def valid_index(idx: int) -> bool:
        try:
            decode_bits(idx)
        except ValueError:
            return False
        return True

    def member(x: int, idx: int) -> bool:
        s = decode_bits(idx)
        return x == len(s) or any(
            F.bit(n, x) != s[n] for n in range(len(s)))

    sb = Subbase(
        name="limit-subbase",
        point_member=lambda x: True,
        index_member=valid_index,
        member=member,
    )
    space = subbase_closure(sb)

    def decide(t: FinSet) -> CoverDecision:
        if not t:
            return not_covers(witness=0)
        bound = 0
        off_prefix = False
        for idx in t:
            s = decode_bits(idx)
            bound = max(bound, len(s),
                        max((F.settle(n) for n in range(len(s))),
                            default=0))
            if any(F.limit(n) != s[n] for n in range(len(s))):
                off_prefix = True
        for x in range(bound + 1):
            if not any(member(x, idx) for idx in t):
                return not_covers(witness=x)
        if off_prefix:
            return COVERS
        return not_covers(witness=bound + 1)

    sub_rel = CoverRelation(
        decide=memoized(decide),
        exactness=Exactness.EXACT,
        name="limit-subbase",
    )
    rel = lift_cover_relation_to_closure(sub_rel, name="limit-closure")

    def cover_stage(s: int) -> FinSet:
        prefixes = [
            encode_bits([F.limit(n) for n in range(k)])
            for k in range(s + 1)
        ]
        return FinSet.of(prefixes)

    limit_cover = EnumSet(
        stage_fn=cover_stage,
        note="prefixes of the limit bits; covers with no finite subcover",
    )

    return LimitSubbaseSpace(
        family=F,
        subbase=sb,
        space=space,
        subbase_relation=sub_rel,
        relation=rel,
        limit_cover=limit_cover,
    )


def limit_readoff(A: EnumSet, n: int,
                  stage_bound: int) -> int | BoundedUnknown:
    """Read the n-th limit bit off an enumerated cover with no finite
    subcover: any member string long enough must agree with the limits."""
    for s in range(stage_bound + 1):
        for code in A.stage(s):
            bits = decode_bits(code)
            if n < len(bits):
                return bits[n]
    return BoundedUnknown(
        reason=f"no member string longer than {n} appeared",
        bounds={"stages": stage_bound})


@dataclass(frozen=True)
class DeadendSpace:
    """Dead-ends of a finite binary tree under "does not extend t" sets."""

    name: str
    tree: tuple[tuple[int, ...], ...]
    deadends: tuple[tuple[int, ...], ...]
    subbase: Subbase
    space: SpaceBase
    subbase_relation: CoverRelation
    relation: CoverRelation
    discrete: DiscreteWitness

    def point_code(self, x: Sequence[int]) -> int:
        return encode_bits(x)

    def node_code(self, t: Sequence[int]) -> int:
        return encode_bits(t)


def _is_prefix(t: Sequence[int], x: Sequence[int]) -> bool:
    return len(t) <= len(x) and tuple(x[: len(t)]) == tuple(t)


def deadend_tree_space(nodes: Iterable[Sequence[int]],
                       name: str = "deadend") -> DeadendSpace:
    """Space of dead-ends of a prefix-closed set of binary strings.

    Rejects trees that are not prefix-closed or hold non-binary entries.
    Point and index scales filter the (finite) code lists, so generous
    bounds see the whole space and small ones keep products tractable.
    """
    tree = sorted({tuple(int(b) for b in t) for t in nodes},
                  key=lambda t: (len(t), t))
    node_set = frozenset(tree)
    for t in tree:
        if any(b not in (0, 1) for b in t):
            raise ValueError(f"node {t} is not a binary string")
        if t and t[:-1] not in node_set:
            raise ValueError(f"tree is not prefix-closed at {t}")

    deadends = tuple(
        t for t in tree
        if t + (0,) not in node_set and t + (1,) not in node_set)
    point_codes = sorted(encode_bits(x) for x in deadends)
    index_codes = sorted(encode_bits(t) for t in tree)
    index_code_set = frozenset(index_codes)
    decoded_points = {c: decode_bits(c) for c in point_codes}

    def member(p: int, idx: int) -> bool:
        return not _is_prefix(decode_bits(idx), decode_bits(p))

    sb = Subbase(
        name=name,
        point_member=lambda p: p in decoded_points,
        index_member=lambda idx: idx in index_code_set,
        member=member,
        point_iter=lambda bound: [c for c in point_codes if c <= bound],
        index_iter=lambda bound: [c for c in index_codes if c <= bound],
    )
    space = subbase_closure(sb)

    def decide(t: FinSet) -> CoverDecision:
        fams = [decode_bits(idx) for idx in t]
        for p in point_codes:
            x = decoded_points[p]
            if not any(not _is_prefix(f, x) for f in fams):
                return not_covers(witness=p)
        return COVERS

    sub_rel = CoverRelation(
        decide=memoized(decide),
        exactness=Exactness.EXACT,
        name=f"{name}-subbase",
    )
    rel = lift_cover_relation_to_closure(sub_rel, name=f"{name}-closure")

    def d(p: int) -> int:
        x = decoded_points.get(p)
        if x is None:
            raise ValueError(f"{p} is not a dead-end code")
        sibs = []
        for i in range(len(x)):
            s = x[:i] + (1 - x[i],)
            if s in node_set:
                sibs.append(encode_bits(s))
        return FinSet.of(sibs).encode()

    return DeadendSpace(
        name=name,
        tree=tuple(tree),
        deadends=deadends,
        subbase=sb,
        space=space,
        subbase_relation=sub_rel,
        relation=rel,
        discrete=DiscreteWitness(d=d),
    )


def full_tree(depth: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for k in range(1, depth + 1):
        out.extend(iproduct((0, 1), repeat=k))
    return out


def comb_tree(k: int) -> list[tuple[int, ...]]:
    spine = [(0,) * j for j in range(k + 1)]
    teeth = [(0,) * j + (1,) for j in range(k)]
    return spine + teeth


def pair_tree() -> list[tuple[int, ...]]:
    return [(), (0,), (1,)]


def fixture_trees() -> dict[str, list[tuple[int, ...]]]:
    return {
        "full3": full_tree(3),
        "comb4": comb_tree(4),
        "pair": pair_tree(),
    }
