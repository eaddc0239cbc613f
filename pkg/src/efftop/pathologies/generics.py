"""Limit families of bits and the sequential generic that produces one.

A limit family is a two-argument bit function together with a declaration
of which argument tends to infinity and exact oracles for the limit values
and their settling indices.  The generic construction extends a finite
binary commitment against a listed family of enumerable string sets,
meeting each one when some compatible string ever shows up and avoiding it
outright otherwise; the prefixes along the way give a family whose limit in
the first argument is the generic itself.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

from ..coding import decode_bits
from ..foundations import EnumSet, FinSet

LIMIT_IN_FIRST = "n"   # f_n(x) settles as n grows, for each fixed x
LIMIT_IN_SECOND = "x"  # f_n(x) settles as x grows, for each fixed n


@dataclass(frozen=True)
class LimitFamily:
    """bit(n, x) with declared limit direction and implementer oracles.

    limit and settle take the value of the non-limiting argument; settle
    returns an index past which the bit no longer changes.
    """

    bit: Callable[[int, int], int]
    limit_arg: str
    limit: Callable[[int], int]
    settle: Callable[[int], int]
    note: str = ""

    def check_stabilized(self, fixed: int, bound: int) -> bool:
        """Does the declared settling index hold up to the bound."""
        s0 = self.settle(fixed)
        want = self.limit(fixed)
        if s0 > bound:
            return False
        if self.limit_arg == LIMIT_IN_FIRST:
            return all(self.bit(v, fixed) == want
                       for v in range(s0, bound + 1))
        return all(self.bit(fixed, v) == want
                   for v in range(s0, bound + 1))


def step_family(limits: Sequence[int], thresholds: Sequence[int],
                limit_arg: str = LIMIT_IN_SECOND,
                note: str = "step") -> LimitFamily:
    """Family that holds the complement bit below a threshold and the limit
    bit on and after it; rows beyond the table are constantly 0."""
    if len(limits) != len(thresholds):
        raise ValueError("one threshold per limit")
    lims = [int(b) for b in limits]
    thrs = list(thresholds)

    def value(fixed: int, moving: int) -> int:
        if fixed >= len(lims):
            return 0
        return lims[fixed] if moving >= thrs[fixed] else 1 - lims[fixed]

    if limit_arg == LIMIT_IN_SECOND:
        def bit(n: int, x: int) -> int:
            return value(n, x)
    else:
        def bit(n: int, x: int) -> int:
            return value(x, n)
    return LimitFamily(
        bit=bit,
        limit_arg=limit_arg,
        limit=lambda fixed: lims[fixed] if fixed < len(lims) else 0,
        settle=lambda fixed: thrs[fixed] if fixed < len(thrs) else 0,
        note=note,
    )


@dataclass(frozen=True)
class RequirementVerdict:
    index: int
    state: str  # MET | AVOIDED
    stage: int | None = None
    prefix: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out: dict = {"index": self.index, "state": self.state}
        if self.stage is not None:
            out["stage"] = self.stage
        if self.prefix is not None:
            out["prefix"] = list(self.prefix)
        return out


@dataclass(frozen=True)
class GenericRun:
    family: LimitFamily
    commitments: tuple[tuple[int, ...], ...]
    verdicts: tuple[RequirementVerdict, ...]
    trace: tuple[str, ...]

    @property
    def limit_bits(self) -> tuple[int, ...]:
        return self.commitments[-1]


def _compatible(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    head = min(len(a), len(b))
    return a[:head] == b[:head]


def kleene_post_generic(D: Sequence[EnumSet],
                        stage_bound: int) -> GenericRun:
    """Sequential finite-extension construction against the listed sets.

    Requirements are served in list order.  For each one, stages are
    scanned upward for the first on which some enumerated string is
    compatible with the running commitment; the least such string by
    (length, lexicographic) order is adopted and the requirement is MET.
    A requirement with no compatible string by the stage bound is AVOIDED,
    and stays avoided: later commitments only extend the current one, and
    any string below an extension is comparable with the commitment
    already.

    The returned family reads bit x of the commitment after n
    requirements, zero-padded, so its limit in n is the final commitment.
    """
    sigma: tuple[int, ...] = ()
    commitments = [sigma]
    verdicts = []
    trace = [json.dumps({"event": "start", "requirements": len(D),
                         "stages": stage_bound},
                        sort_keys=True, separators=(",", ":"))]
    for k, dset in enumerate(D):
        found: tuple[int, ...] | None = None
        found_stage: int | None = None
        seen: set[int] = set()
        for s in range(stage_bound + 1):
            fresh = [c for c in dset.stage(s) if c not in seen]
            seen.update(fresh)
            if not fresh:
                continue
            best = None
            for code in fresh:
                tau = tuple(decode_bits(code))
                if _compatible(sigma, tau):
                    key = (len(tau), tau)
                    if best is None or key < best[0]:
                        best = (key, tau)
            if best is not None:
                found = best[1]
                found_stage = s
                break
        if found is None:
            verdicts.append(RequirementVerdict(index=k, state="AVOIDED"))
            trace.append(json.dumps(
                {"event": "avoid", "index": k},
                sort_keys=True, separators=(",", ":")))
        else:
            if len(found) > len(sigma):
                sigma = found
            verdicts.append(RequirementVerdict(
                index=k, state="MET", stage=found_stage, prefix=found))
            trace.append(json.dumps(
                {"event": "meet", "index": k, "stage": found_stage,
                 "prefix": list(found)},
                sort_keys=True, separators=(",", ":")))
        commitments.append(sigma)

    tail = len(commitments) - 1

    def bit(n: int, x: int) -> int:
        c = commitments[min(n, tail)]
        return c[x] if x < len(c) else 0

    def limit(x: int) -> int:
        c = commitments[tail]
        return c[x] if x < len(c) else 0

    def settle(x: int) -> int:
        want = limit(x)
        s0 = tail
        for n in range(tail, -1, -1):
            if bit(n, x) != want:
                break
            s0 = n
        return s0

    family = LimitFamily(bit=bit, limit_arg=LIMIT_IN_FIRST,
                         limit=limit, settle=settle, note="generic")
    return GenericRun(family=family, commitments=tuple(commitments),
                      verdicts=tuple(verdicts), trace=tuple(trace))


def verify_verdicts(run: GenericRun, D: Sequence[EnumSet],
                    stage_bound: int) -> list[str]:
    """Check every verdict against the final commitment; empty is good.

    MET needs the recorded prefix compatible with the final commitment and
    enumerated by its stage; AVOIDED needs no enumerated string compatible
    with the final commitment at all.
    """
    final = run.limit_bits
    bad = []
    for v, dset in zip(run.verdicts, D):
        codes = dset.stage(stage_bound)
        if v.state == "MET":
            if v.prefix is None or not _compatible(final, v.prefix):
                bad.append(f"requirement {v.index}: met prefix detached "
                           f"from the limit")
            elif all(tuple(decode_bits(c)) != v.prefix
                     for c in dset.stage(v.stage)):
                bad.append(f"requirement {v.index}: met prefix not "
                           f"enumerated by stage {v.stage}")
        else:
            hits = [c for c in codes
                    if _compatible(final, tuple(decode_bits(c)))]
            if hits:
                bad.append(f"requirement {v.index}: avoided but "
                           f"{hits[:3]} are compatible")
    return bad


@dataclass(frozen=True)
class TychonoffKey:
    """Finite set on which the limit is constantly i, meeting every listed
    set."""

    b: FinSet
    i: int
    bound: int


def tychonoff_key_extraction(
    F: LimitFamily,
    i: int,
    s_seq: Sequence[FinSet],
    count: int,
    check_bound: int,
) -> TychonoffKey:
    """Key set for a family of finite sets each meeting {x : lim = i}.

    Per listed set, some element with limit i is found by the oracle; the
    key set collects every x with limit i below one more than the largest
    such element, so it meets all of them at once.  Raises when a listed
    set has no element with the right limit.
    """
    if F.limit_arg != LIMIT_IN_FIRST:
        raise ValueError("key extraction needs a limit in the first "
                         "argument")
    top = -1
    for m in range(min(count, len(s_seq))):
        hit = next((x for x in s_seq[m] if F.limit(x) == i), None)
        if hit is None:
            raise ValueError(f"s_{m} has no element with limit {i}")
        top = max(top, hit)
    ell = top + 1
    b = FinSet.of(x for x in range(ell) if F.limit(x) == i)
    for x in b:
        if not F.check_stabilized(x, check_bound):
            raise ValueError(f"limit at {x} not settled within "
                             f"{check_bound}")
    return TychonoffKey(b=b, i=i, bound=ell)
