"""Injections, their deficiency sets, and the orders they induce.

An injection f pulls two different structures out of one function: the
deficiency set {x : some later argument gets a smaller value}, which is
enumerable with a decidable desk oracle for the shipped fixtures, and the
linear order that compares arguments by value.  The successor walk along the
order's gaps recovers the increasing enumeration of the range.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..covers import BoundedUnknown
from ..foundations import EnumSet, FinSet
from ..orders import LinearOrder


@dataclass(frozen=True)
class Injection:
    """A total injection with implementer-side oracles.

    range_member and deficiency_member are exact answers the fixtures can
    afford to ship; the enumerable approximations are built from f alone.
    """

    name: str
    f: Callable[[int], int]
    range_member: Callable[[int], bool] | None = None
    deficiency_member: Callable[[int], bool] | None = None


def validate_injection(inj: Injection, bound: int) -> list[tuple[int, int]]:
    """Colliding argument pairs at scale; empty means injective there."""
    seen: dict[int, int] = {}
    bad = []
    for x in range(bound + 1):
        v = inj.f(x)
        if v in seen:
            bad.append((seen[v], x))
        else:
            seen[v] = x
    return bad


def default_injection() -> Injection:
    """Alternates large and small values: f(2k) = 1000+k, f(2k+1) = k.

    Every even argument is deficient (the next odd argument is smaller);
    no odd argument ever is, so the deficiency set is exactly the evens.
    The range is all of the naturals.
    """
    return Injection(
        name="alternating",
        f=lambda x: 1000 + x // 2 if x % 2 == 0 else x // 2,
        range_member=lambda v: True,
        deficiency_member=lambda x: x % 2 == 0,
    )


def prefix_injection(prefix: Sequence[int],
                     name: str = "") -> Injection:
    """Finite table extended by an increasing tail above the table's values.

    The tail f(x) = x + max(prefix) + 1 adds no deficiencies of its own and
    none against the table, so the deficiency set is settled inside the
    prefix.
    """
    vals = list(prefix)
    if len(set(vals)) != len(vals):
        raise ValueError("prefix is not injective")
    shift = (max(vals) + 1) if vals else 0
    table = set(vals)
    n = len(vals)

    def f(x: int) -> int:
        return vals[x] if x < n else x + shift

    def in_range(v: int) -> bool:
        return v in table or (v >= n + shift)

    def deficient(x: int) -> bool:
        if x >= n:
            return False
        return any(vals[y] < vals[x] for y in range(x + 1, n))

    return Injection(name=name or f"prefix:{vals}", f=f,
                     range_member=in_range, deficiency_member=deficient)


def deficiency_set(inj: Injection) -> EnumSet:
    """Stage s holds the x < s already seen to lose to a later argument
    y ≤ s."""
    f = inj.f

    def at(s: int) -> FinSet:
        return FinSet.of(x for x in range(s)
                         if any(f(y) < f(x) for y in range(x + 1, s + 1)))

    return EnumSet(at, note=f"deficiency({inj.name})")


def range_enumeration(inj: Injection, count: int,
                      probe_bound: int = 1 << 20) -> list[int]:
    """First values of the increasing enumeration of the range, by oracle."""
    if inj.range_member is None:
        raise ValueError(f"{inj.name} carries no range oracle")
    out = []
    v = 0
    while len(out) < count and v <= probe_bound:
        if inj.range_member(v):
            out.append(v)
        v += 1
    return out


def injection_ordered_space(inj: Injection,
                            with_top: bool = False) -> LinearOrder:
    """Arguments compared by value; with_top re-labels via x-1 and puts the
    fresh point 0 above everything."""
    f = inj.f
    if not with_top:
        return LinearOrder(
            name=f"inj:{inj.name}",
            domain_member=lambda x: True,
            less=lambda x, y: f(x) < f(y),
        )

    def less(x: int, y: int) -> bool:
        if y == 0:
            return x != 0
        if x == 0:
            return False
        return f(x - 1) < f(y - 1)

    return LinearOrder(
        name=f"inj-top:{inj.name}",
        domain_member=lambda x: True,
        less=less,
    )


def successor_from_gaps(
    inj: Injection,
    gaps: Sequence[tuple[int, int]],
    point_bound: int,
) -> list[int]:
    """Walk the successor map read off the gap list, starting at the least
    scale point, and return the f-values along the way.

    The walk is verified strictly increasing, and when the range oracle is
    present its prefix must match the increasing enumeration of the range
    exactly.
    """
    order = injection_ordered_space(inj)
    pts = order.points(point_bound)
    start = min(pts, key=inj.f)
    succ = dict(gaps)
    chain = [start]
    while chain[-1] in succ:
        nxt = succ[chain[-1]]
        if nxt in chain:
            raise ValueError("gap list loops")
        chain.append(nxt)
    values = [inj.f(x) for x in chain]
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise ValueError(f"successor walk not increasing at {a},{b}")
    if inj.range_member is not None:
        expect = range_enumeration(inj, len(values))
        if values != expect:
            raise ValueError(
                f"walk {values[:6]}... disagrees with the range "
                f"enumeration {expect[:6]}...")
    return values


@dataclass(frozen=True)
class KeySet:
    """Finite set missing A and meeting every listed s_n."""

    b: FinSet
    r0: int
    bounds: dict


@dataclass(frozen=True)
class DisjointFamily:
    """Refutation branch: pairwise disjoint residues s_n \\ a_m."""

    sets: tuple[FinSet, ...]
    picks: tuple[tuple[int, int], ...]  # (m, n) per set
    bounds: dict


def hypersimple_b_extraction(
    A: EnumSet,
    member: Callable[[int], bool] | None,
    s_seq: Sequence[FinSet],
    n_bound: int,
    m_bound: int,
) -> KeySet | DisjointFamily | BoundedUnknown:
    """Key-set extraction against a listed family of finite sets.

    r(m,n) is the least element of s_n not enumerated by stage m; it only
    grows with m.  With the exact oracle the limit of each column is the
    least element of s_n outside A, their maximum bounds the table, and the
    key set b collects everything outside A below that bound.  Without the
    oracle, a table whose last two rows agree is trusted the same way; a
    still-growing table feeds the refutation branch instead, greedily
    collecting residues whose minima have climbed past everything already
    chosen, which makes them pairwise disjoint.
    """
    n_bound = min(n_bound, len(s_seq) - 1)
    bounds = {"n": n_bound, "m": m_bound}
    for n in range(n_bound + 1):
        if member is not None and not any(not member(x) for x in s_seq[n]):
            raise ValueError(f"s_{n} lies inside A; no key set can exist")
        if not s_seq[n]:
            raise ValueError(f"s_{n} is empty")

    stages = [A.stage(m) for m in range(m_bound + 1)]

    def r(m: int, n: int) -> int | None:
        left = [x for x in s_seq[n] if x not in stages[m]]
        return min(left) if left else None

    if member is not None:
        r0 = 0
        for n in range(n_bound + 1):
            r0 = max(r0, min(x for x in s_seq[n] if not member(x)))
        b = FinSet.of(x for x in range(r0 + 1) if not member(x))
        for n in range(n_bound + 1):
            # guaranteed by construction; a failure means a broken oracle
            if not any(x in b for x in s_seq[n]):
                raise AssertionError(f"key set misses s_{n}")
        return KeySet(b=b, r0=r0, bounds=bounds)

    last = [r(m_bound, n) for n in range(n_bound + 1)]
    prev = [r(m_bound - 1, n) for n in range(n_bound + 1)]
    if None not in last and last == prev:
        r0 = max(last)
        final = stages[m_bound]
        b = FinSet.of(x for x in range(r0 + 1) if x not in final)
        if all(any(x in b for x in s_seq[n]) for n in range(n_bound + 1)):
            return KeySet(b=b, r0=r0, bounds=bounds)

    chosen: list[FinSet] = []
    picks: list[tuple[int, int]] = []
    top = -1
    for n in range(n_bound + 1):
        for m in range(m_bound + 1):
            rv = r(m, n)
            if rv is not None and rv > top:
                d = FinSet.of(x for x in s_seq[n] if x not in stages[m])
                chosen.append(d)
                picks.append((m, n))
                top = max(d)
                break
    if len(chosen) >= 2:
        return DisjointFamily(sets=tuple(chosen), picks=tuple(picks),
                              bounds=bounds)
    return BoundedUnknown(reason="table neither settles nor climbs",
                          bounds=bounds)
