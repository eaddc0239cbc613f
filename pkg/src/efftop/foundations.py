"""Finite sets, enumerable sets and stage predicates.

An enumerable set is simulated as a nondecreasing sequence of finite stage
sets; membership questions are always asked "at stage s".  Stage predicates
carry a declared class: MONOTONE (once true, stays true), LIMIT (eventually
constant in the stage) or RAW.  The implementer-side oracle that some
constructions ship is just an exact membership function next to the staged
one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator

from .coding import decode_seq, encode_seq
from .config import DEFAULT_POINT_BOUND


@dataclass(frozen=True)
class FinSet:
    """Canonical finite set of naturals: a strictly increasing tuple."""

    items: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        prev = -1
        for v in self.items:
            if v < 0:
                raise ValueError("FinSet holds naturals")
            if v <= prev:
                raise ValueError("FinSet items must be strictly increasing")
            prev = v

    @classmethod
    def of(cls, values: Iterable[int]) -> "FinSet":
        return cls(tuple(sorted(set(values))))

    def __contains__(self, x: int) -> bool:
        return x in self.items

    def __iter__(self) -> Iterator[int]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def union(self, other: "FinSet") -> "FinSet":
        return FinSet.of(set(self.items) | set(other.items))

    def intersect(self, other: "FinSet") -> "FinSet":
        return FinSet.of(set(self.items) & set(other.items))

    def difference(self, other: "FinSet") -> "FinSet":
        return FinSet.of(set(self.items) - set(other.items))

    def issubset(self, other: "FinSet") -> bool:
        return set(self.items) <= set(other.items)

    def min(self) -> int:
        if not self.items:
            raise ValueError("min of empty FinSet")
        return self.items[0]

    def max(self) -> int:
        if not self.items:
            raise ValueError("max of empty FinSet")
        return self.items[-1]

    def encode(self) -> int:
        return encode_seq(self.items)

    @classmethod
    def decode(cls, code: int) -> "FinSet":
        items = decode_seq(code)
        return cls(items)  # raises unless strictly increasing


def is_finset_code(code: int) -> bool:
    try:
        FinSet.decode(code)
    except ValueError:
        return False
    return True


class PredicateKind(Enum):
    MONOTONE = "monotone"
    LIMIT = "limit"
    RAW = "raw"


@dataclass(frozen=True)
class StagePredicate:
    """A stage-indexed boolean of one coded argument."""

    fn: Callable[[int, int], bool]
    kind: PredicateKind
    note: str = ""

    def holds(self, x: int, stage: int) -> bool:
        return bool(self.fn(x, stage))


def stabilization_stage(p: StagePredicate, x: int, bound: int) -> int:
    """Least s0 <= bound with p(x, .) constant on [s0, bound]; an answer of
    `bound` means the value was still moving at the end (only meaningful for
    LIMIT predicates)."""
    last = p.holds(x, bound)
    s0 = bound
    for s in range(bound - 1, -1, -1):
        if p.holds(x, s) != last:
            break
        s0 = s
    return s0


@dataclass(frozen=True)
class EnumSet:
    """Enumerable set given by its finite stage sets.

    stage(s) must be nondecreasing in s; that is an invariant to test, not a
    silent coercion, so `first_decrease` is provided for checks.
    """

    stage_fn: Callable[[int], FinSet]
    note: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def stage(self, s: int) -> FinSet:
        if s < 0:
            raise ValueError("stage index is a natural")
        got = self._cache.get(s)
        if got is None:
            got = self.stage_fn(s)
            self._cache[s] = got
        return got

    def member_at(self, x: int, s: int) -> bool:
        return x in self.stage(s)

    def first_decrease(self, bound: int) -> int | None:
        """First s < bound with stage(s) not a subset of stage(s+1)."""
        prev = self.stage(0)
        for s in range(1, bound + 1):
            cur = self.stage(s)
            if not prev.issubset(cur):
                return s - 1
            prev = cur
        return None


def enumset_from_stages(stages: list[FinSet], note: str = "") -> EnumSet:
    """Explicit stage table; frozen at the last listed stage."""
    if not stages:
        stages = [FinSet()]
    table = tuple(stages)

    def at(s: int) -> FinSet:
        return table[min(s, len(table) - 1)]

    return EnumSet(at, note=note)


def constant_enumset(fs: FinSet, note: str = "") -> EnumSet:
    return EnumSet(lambda s: fs, note=note)


def empty_enumset(note: str = "empty") -> EnumSet:
    return constant_enumset(FinSet(), note=note)


def enumset_from_predicate(
    p: StagePredicate, arg_bound: int = DEFAULT_POINT_BOUND, note: str = ""
) -> EnumSet:
    """{x : p fires at some stage}, staged.

    Stage s holds {x <= max(s, arg_bound) : p(x, s)}.  Requires a MONOTONE
    predicate; the growing argument window plus monotonicity make the stages
    nondecreasing, and membership at stage s agrees with the exists-a-stage
    closure for every x <= arg_bound.
    """
    if p.kind is not PredicateKind.MONOTONE:
        raise ValueError("enumset_from_predicate needs a MONOTONE predicate")

    def at(s: int) -> FinSet:
        top = max(s, arg_bound)
        return FinSet(tuple(x for x in range(top + 1) if p.holds(x, s)))

    return EnumSet(at, note=note or p.note)


def enumset_union(a: EnumSet, b: EnumSet) -> EnumSet:
    return EnumSet(lambda s: a.stage(s).union(b.stage(s)),
                   note=f"union({a.note},{b.note})")


def enumset_intersect_fin(a: EnumSet, fs: FinSet) -> EnumSet:
    # Intersection with a decidable finite set keeps enumerability.
    return EnumSet(lambda s: a.stage(s).intersect(fs),
                   note=f"restrict({a.note})")


def exists_stage(p: StagePredicate, x: int, stage_bound: int) -> int | None:
    """Least s <= stage_bound with p(x, s), else None.  Brute force."""
    for s in range(stage_bound + 1):
        if p.holds(x, s):
            return s
    return None
