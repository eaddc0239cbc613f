"""Stage machine building a discrete complete order out of blocks.

Points live in blocks indexed by dyadic rationals in [0, 1]; the block
order is the dyadic order and points inside a block sit at consecutive
integer indices.  Padding keeps every level filled, and requirements watch
pairs of enumerable sets, shifting whole blocks together at most once each
so that the watched endpoints land in one block at a fixed distance.

The block at 0 grows only upward and the block at 1 only downward; both
have birthday 0, so they are eligible whenever they intersect a watched
interval and therefore never get moved themselves.  Every run is
deterministic and emits a JSONL event log whose bytes replay exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ..coding import pair
from ..foundations import EnumSet
from ..orders import LinearOrder

# blocks born after this birthday never come into existence; keeps the
# block count at 2^cap + 1 instead of doubling every stage
BIRTHDAY_CAP = 6

BOTTOM = Fraction(0)
TOP = Fraction(1)


def birthday(d: Fraction) -> int:
    """Least n >= 0 making d*2^n an integer."""
    if not 0 <= d <= 1:
        raise ValueError(f"{d} is not in [0,1]")
    n = 0
    while (d * (1 << n)).denominator != 1:
        n += 1
    return n


def level(d: Fraction, idx: int) -> int:
    return birthday(d) + abs(idx)


def dyadics_up_to(n: int) -> list[Fraction]:
    """All block labels with birthday at most n, in block order."""
    step = Fraction(1, 1 << n)
    return [k * step for k in range((1 << n) + 1)]


@dataclass(frozen=True)
class RequirementStatus:
    """SHIFTED carries its stage; VACUOUS with endpoints and a distance
    means the watched points already share a block, so nothing was ever
    pending; bare VACUOUS means the premise fails at the final stage."""

    pair: tuple[int, int]
    code: int
    state: str  # SHIFTED | WAITING | VACUOUS
    stage: int | None = None
    endpoints: tuple[int, int] | None = None
    distance: int | None = None

    def to_json(self) -> dict:
        out = {"pair": list(self.pair), "code": self.code,
               "state": self.state}
        if self.stage is not None:
            out["stage"] = self.stage
        if self.endpoints is not None:
            out["endpoints"] = list(self.endpoints)
        if self.distance is not None:
            out["distance"] = self.distance
        return out


@dataclass
class BlockMachineState:
    cap: int
    stage: int = -1
    blocks: dict[Fraction, dict[int, int]] = field(default_factory=dict)
    place: dict[int, tuple[Fraction, int]] = field(default_factory=dict)
    next_label: int = 0
    shifted: dict[int, int] = field(default_factory=dict)

    def less(self, a: int, b: int) -> bool:
        return self.place[a] < self.place[b]

    def block_of(self, x: int) -> Fraction:
        return self.place[x][0]

    def neighbors(self, x: int) -> tuple[int | None, int | None]:
        """In-block neighbors at the two adjacent indices."""
        d, idx = self.place[x]
        blk = self.blocks[d]
        return blk.get(idx - 1), blk.get(idx + 1)

    def order_snapshot(self) -> LinearOrder:
        place = dict(self.place)
        return LinearOrder(
            name=f"blocks@{self.stage}",
            domain_member=lambda x: x in place,
            less=lambda a, b: place[a] < place[b],
            point_iter=lambda bound: [x for x in sorted(place)
                                      if x <= bound],
        )

    def placements(self) -> dict[int, tuple[Fraction, int]]:
        return dict(self.place)


def check_invariants(state: BlockMachineState) -> list[str]:
    """Structural checks; the returned list is empty on a healthy state."""
    bad = []
    s, cap = state.stage, state.cap
    expect = dyadics_up_to(min(s, cap)) if s >= 0 else []
    for d in state.blocks:
        if birthday(d) > cap:
            bad.append(f"block {d} beyond the cap exists")
    for d in expect:
        blk = state.blocks.get(d)
        if not blk:
            bad.append(f"block {d} missing or empty at stage {s}")
            continue
        lo, hi = min(blk), max(blk)
        if set(blk) != set(range(lo, hi + 1)):
            bad.append(f"block {d} indices not contiguous")
        if not lo <= 0 <= hi:
            bad.append(f"block {d} does not contain index 0")
        if d == BOTTOM and lo != 0:
            bad.append("bottom block grew downward")
        if d == TOP and hi != 0:
            bad.append("top block grew upward")
        radius = s - birthday(d)
        want_lo = 0 if d == BOTTOM else -radius
        want_hi = 0 if d == TOP else radius
        if lo > want_lo or hi < want_hi:
            bad.append(f"block {d} not padded to level {s}")
    seen: dict[int, tuple[Fraction, int]] = {}
    for d, blk in state.blocks.items():
        for idx, label in blk.items():
            if label in seen:
                bad.append(f"label {label} placed twice")
            seen[label] = (d, idx)
    if seen != state.place:
        bad.append("placement table disagrees with the blocks")
    if set(seen) != set(range(state.next_label)):
        bad.append("labels are not an initial segment of the naturals")
    return bad


def _emit(events: list[str], **payload) -> None:
    events.append(json.dumps(payload, sort_keys=True,
                             separators=(",", ":")))


def _pad(state: BlockMachineState, s: int, events: list[str]) -> None:
    """Create every missing point of level <= s, in (block, index) order."""
    for d in dyadics_up_to(min(s, state.cap)):
        blk = state.blocks.setdefault(d, {})
        radius = s - birthday(d)
        lo = 0 if d == BOTTOM else -radius
        hi = 0 if d == TOP else radius
        for idx in range(lo, hi + 1):
            if idx not in blk:
                label = state.next_label
                state.next_label += 1
                blk[idx] = label
                state.place[label] = (d, idx)
                _emit(events, event="pad", s=s, block=str(d), index=idx,
                      label=label)


def _do_shift(state: BlockMachineState, bd: Fraction,
              intersecting: list[Fraction], s: int, code: int,
              events: list[str]) -> None:
    """Move every other intersecting block bodily into the block at bd."""
    target = state.blocks[bd]
    below = [d for d in intersecting if d < bd]
    above = [d for d in intersecting if d > bd]
    low_stream = [(d, idx) for d in below
                  for idx in sorted(state.blocks[d])]
    high_stream = [(d, idx) for d in above
                   for idx in sorted(state.blocks[d])]
    lo, hi = min(target), max(target)
    start = lo - len(low_stream)
    for offset, (d, idx) in enumerate(low_stream):
        label = state.blocks[d].pop(idx)
        new_idx = start + offset
        target[new_idx] = label
        state.place[label] = (bd, new_idx)
        _emit(events, event="move", s=s, code=code, label=label,
              source=[str(d), idx], dest=[str(bd), new_idx])
    for offset, (d, idx) in enumerate(high_stream):
        label = state.blocks[d].pop(idx)
        new_idx = hi + 1 + offset
        target[new_idx] = label
        state.place[label] = (bd, new_idx)
        _emit(events, event="move", s=s, code=code, label=label,
              source=[str(d), idx], dest=[str(bd), new_idx])


@dataclass
class BlockMachineRun:
    state: BlockMachineState
    order: LinearOrder
    statuses: dict[int, RequirementStatus]
    log: list[str]

    def log_text(self) -> str:
        return "\n".join(self.log) + "\n"


def block_machine_run(
    W: Sequence[EnumSet],
    stages: int,
    requirements: Sequence[tuple[int, int]] | None = None,
    cap: int = BIRTHDAY_CAP,
    on_stage: Callable[[BlockMachineState], None] | None = None,
) -> BlockMachineRun:
    """Run the machine for stages 0..stages-1.

    Each stage pads all levels, then serves the pending requirements in
    code order.  A requirement with watched endpoints p strictly below q in
    different blocks acts when at most one intersecting block has birthday
    at most its code: the points of every other intersecting block move
    into that block (the least (birthday, label) intersecting block when
    none is eligible), vacated blocks refill immediately, and the
    requirement never acts again.
    """
    if stages < 1:
        raise ValueError("need at least one stage")
    if requirements is None:
        requirements = [(e, f) for e in range(len(W))
                        for f in range(len(W)) if e != f]
    reqs = {pair(e, f): (e, f) for e, f in requirements}
    if len(reqs) != len(requirements):
        raise ValueError("duplicate requirement pairs")

    state = BlockMachineState(cap=cap)
    events: list[str] = []
    _emit(events, event="header", version=1, cap=cap, stages=stages,
          sets=len(W), requirements=sorted([e, f] for e, f in requirements))

    for s in range(stages):
        state.stage = s
        _emit(events, event="stage", s=s)
        _pad(state, s, events)
        for code in sorted(reqs):
            if code in state.shifted:
                continue
            e, f = reqs[code]
            we, wf = W[e].stage(s), W[f].stage(s)
            for x in we.union(wf):
                if x >= s:
                    raise ValueError(
                        f"w_{{{e if x in we else f},{s}}} contains {x}, "
                        f"breaking the stage-boundedness precondition")
            if not we or not wf:
                continue
            p = max(we, key=lambda x: state.place[x])
            q = min(wf, key=lambda x: state.place[x])
            if p == q or not state.less(p, q):
                continue
            dp, dq = state.block_of(p), state.block_of(q)
            if dp == dq:
                continue
            intersecting = [d for d in sorted(state.blocks)
                            if dp <= d <= dq and state.blocks[d]]
            eligible = [d for d in intersecting if birthday(d) <= code]
            if len(eligible) >= 2:
                continue
            bd = eligible[0] if eligible else min(
                intersecting, key=lambda d: (birthday(d), d))
            _emit(events, event="shift", s=s, code=code, pair=[e, f],
                  into=str(bd))
            _do_shift(state, bd, intersecting, s, code, events)
            state.shifted[code] = s
            _pad(state, s, events)  # refill the vacated blocks
        if on_stage is not None:
            on_stage(state)

    _emit(events, event="end", s=stages - 1, points=state.next_label)

    final = stages - 1
    statuses: dict[int, RequirementStatus] = {}
    for code in sorted(reqs):
        e, f = reqs[code]
        we, wf = W[e].stage(final), W[f].stage(final)
        p = max(we, key=lambda x: state.place[x]) if we else None
        q = min(wf, key=lambda x: state.place[x]) if wf else None
        ends = (p, q) if p is not None and q is not None else None
        same_block = (ends is not None
                      and state.block_of(p) == state.block_of(q))
        dist = (state.place[q][1] - state.place[p][1]) if same_block else None
        if code in state.shifted:
            statuses[code] = RequirementStatus(
                pair=(e, f), code=code, state="SHIFTED",
                stage=state.shifted[code], endpoints=ends, distance=dist)
        elif ends is None or p == q or not state.less(p, q):
            statuses[code] = RequirementStatus(pair=(e, f), code=code,
                                               state="VACUOUS")
        elif same_block:
            statuses[code] = RequirementStatus(
                pair=(e, f), code=code, state="VACUOUS",
                endpoints=ends, distance=dist)
        else:
            statuses[code] = RequirementStatus(pair=(e, f), code=code,
                                               state="WAITING",
                                               endpoints=ends)

    return BlockMachineRun(
        state=state,
        order=state.order_snapshot(),
        statuses=statuses,
        log=events,
    )


def replay_matches(run: BlockMachineRun, W: Sequence[EnumSet],
                   stages: int,
                   requirements: Sequence[tuple[int, int]] | None = None,
                   cap: int = BIRTHDAY_CAP) -> bool:
    """Re-run with the same inputs and compare log bytes."""
    again = block_machine_run(W, stages, requirements=requirements, cap=cap)
    return again.log_text() == run.log_text()
