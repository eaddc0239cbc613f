"""Named space instances: construction, witnesses, and spec parsing.

A spec string is "name" or "name:params".  Two composite forms recurse:
"product:<spec>;<spec>" and "subspace:<spec>;<pred>" with pred one of
evens, odds, all, lt:k.  Custom orders loaded from a JSON file resolve
through the ordered builder by name.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable

from .coding import encode_bits, pair, unpair
from .covers import (
    COVERS,
    CoverDecision,
    CoverRelation,
    Exactness,
    memoized,
    not_covers,
)
from .foundations import EnumSet, FinSet
from .orders import (
    LinearOrder,
    gap_set,
    hausdorff_from_gaps,
    ordered_interval_cover_relation,
    ordered_space,
    permutation_order,
    finite_order,
)
from .pathologies import (
    BASIC,
    DISCRETE,
    default_injection,
    deficiency_set,
    fixture_alltrue,
    fixture_holes,
    fixture_parity,
    fixture_trees,
    deadend_tree_space,
    hypersimple_space,
    injection_ordered_space,
    limit_subbase_space,
    step_family,
    tychonoff_spaces,
)
from .separation import DiscreteWitness, HausdorffWitness, \
    discrete_to_hausdorff
from .spaces import SpaceBase, Subbase, discrete_space, product, subspace


@dataclass
class SpaceInstance:
    """A space plus whatever certified structure its construction offers.

    point_bound/index_bound cap the scale sweeps for spaces whose codes
    outgrow the shared defaults (tree point codes, product index pairs);
    None defers to the run configuration.
    """

    spec: str
    space: SpaceBase
    relation: CoverRelation | None = None
    subbase: Subbase | None = None
    subbase_relation: CoverRelation | None = None
    discrete: DiscreteWitness | None = None
    hausdorff: HausdorffWitness | None = None
    point_bound: int | None = None
    index_bound: int | None = None
    extras: dict = field(default_factory=dict)


def _exact_finite_relation(space: SpaceBase, points: list[int],
                           name: str) -> CoverRelation:
    """Scan an explicit finite point list; exact because the list is the
    whole space."""

    def decide(t: FinSet) -> CoverDecision:
        for x in points:
            if not any(space.basic_member(x, i) for i in t):
                return not_covers(witness=x)
        return COVERS

    return CoverRelation(decide=memoized(decide),
                         exactness=Exactness.EXACT, name=name)


def two_blocks_order() -> LinearOrder:
    """Evens ascending, then odds descending: a copy of the naturals below
    a reversed copy, with a cut where they meet."""

    def less(x: int, y: int) -> bool:
        ex, ey = x % 2 == 0, y % 2 == 0
        if ex and ey:
            return x < y
        if not ex and not ey:
            return x > y
        return ex

    return LinearOrder(name="two-blocks",
                       domain_member=lambda x: True, less=less)


def dyadic_value(n: int) -> Fraction:
    """Breadth-first enumeration of the dyadics in (0,1): 1/2, 1/4, 3/4,
    1/8, 3/8, ..."""
    level = (n + 1).bit_length()
    pos = n + 1 - (1 << (level - 1))
    return Fraction(2 * pos + 1, 1 << level)


def dyadic_order() -> LinearOrder:
    return LinearOrder(
        name="dense",
        domain_member=lambda x: True,
        less=lambda x, y: dyadic_value(x) < dyadic_value(y),
    )


def _ordered_instance(order: LinearOrder, spec: str,
                      scale: int = 64) -> SpaceInstance:
    space = ordered_space(order)
    gaps = gap_set(order, scale)
    h0, h1 = hausdorff_from_gaps(order, gaps, probe_bound=8 * scale)
    return SpaceInstance(
        spec=spec,
        space=space,
        relation=ordered_interval_cover_relation(order),
        hausdorff=HausdorffWitness(h0=h0, h1=h1),
        index_bound=16,
        extras={"order": order, "gaps": gaps},
    )


_ORDER_BUILDERS: dict[str, Callable[[], LinearOrder]] = {
    "finite10": lambda: finite_order(10),
    "injection": lambda: injection_ordered_space(default_injection()),
    "injection-top": lambda: injection_ordered_space(default_injection(),
                                                     with_top=True),
    "two-blocks": two_blocks_order,
    "dense": dyadic_order,
}


def _build_discrete(params: str) -> SpaceInstance:
    n = int(params or "10")
    space = discrete_space(n)
    d = DiscreteWitness(d=lambda x: x)
    return SpaceInstance(
        spec=f"discrete:{n}",
        space=space,
        relation=_exact_finite_relation(space, list(range(n)),
                                        f"discrete:{n}"),
        discrete=d,
        hausdorff=discrete_to_hausdorff(d),
        point_bound=max(n + 4, 16),
        index_bound=max(n + 4, 16),
    )


def _build_ordered(params: str,
                   orders: dict[str, LinearOrder] | None) -> SpaceInstance:
    name = params or "finite10"
    if orders and name in orders:
        return _ordered_instance(orders[name], f"ordered:{name}")
    builder = _ORDER_BUILDERS.get(name)
    if builder is None:
        raise KeyError(f"unknown order fixture {name!r}")
    return _ordered_instance(builder(), f"ordered:{name}")


def _build_hypersimple(params: str) -> SpaceInstance:
    if params not in ("", "default"):
        raise KeyError(f"unknown hypersimple fixture {params!r}")
    inj = default_injection()
    hs = hypersimple_space(deficiency_set(inj), lambda x: x % 2 == 0,
                           name="hypersimple:default")
    return SpaceInstance(
        spec="hypersimple:default",
        space=hs.space,
        relation=hs.relation,
        subbase=hs.subbase,
        subbase_relation=hs.subbase_relation,
        discrete=hs.discrete,
        hausdorff=discrete_to_hausdorff(hs.discrete),
        index_bound=12,
        extras={"hs": hs, "injection": inj},
    )


_PI01 = {"alltrue": fixture_alltrue, "holes": fixture_holes,
         "parity": fixture_parity}


def _build_pi01(params: str) -> SpaceInstance:
    name = params or "alltrue"
    builder = _PI01.get(name)
    if builder is None:
        raise KeyError(f"unknown predicate fixture {name!r}")
    p = builder()
    return SpaceInstance(
        spec=f"pi01:{name}",
        space=p.space,
        relation=p.relation,
        subbase=p.subbase,
        subbase_relation=p.subbase_relation,
        index_bound=12,
        extras={"pi01": p},
    )


_TYCHONOFF_PAIRS: dict[str, "TychonoffPair"] = {}


def _tychonoff_pair(variant: str):
    """One shared pair per variant, so side 0 and side 1 instances agree
    on the family object itself."""
    if variant not in _TYCHONOFF_PAIRS:
        from .pathologies import alternating_family
        _TYCHONOFF_PAIRS[variant] = tychonoff_spaces(alternating_family(),
                                                     variant)
    return _TYCHONOFF_PAIRS[variant]


def _build_tychonoff(params: str) -> SpaceInstance:
    parts = (params or "basic,0").split(",")
    if len(parts) != 2 or parts[0] not in (BASIC, DISCRETE) \
            or parts[1] not in ("0", "1"):
        raise KeyError(f"tychonoff wants variant,side; got {params!r}")
    variant, side = parts[0], int(parts[1])
    tp = _tychonoff_pair(variant)
    d = tp.discrete[side] if tp.discrete else None
    return SpaceInstance(
        spec=f"tychonoff:{variant},{side}",
        space=tp.spaces[side],
        relation=tp.relations[side],
        subbase=tp.subbases[side],
        subbase_relation=tp.subbase_relations[side],
        discrete=d,
        hausdorff=discrete_to_hausdorff(d) if d else None,
        index_bound=16,
        extras={"pair": tp, "side": side},
    )


def _build_deadend(params: str) -> SpaceInstance:
    name = params or "full3"
    trees = fixture_trees()
    if name not in trees:
        raise KeyError(f"unknown tree fixture {name!r}")
    ds = deadend_tree_space(trees[name], name=f"deadend:{name}")
    return SpaceInstance(
        spec=f"deadend:{name}",
        space=ds.space,
        relation=ds.relation,
        subbase=ds.subbase,
        subbase_relation=ds.subbase_relation,
        discrete=ds.discrete,
        hausdorff=discrete_to_hausdorff(ds.discrete),
        point_bound=2048,
        index_bound=512,
        extras={"deadend": ds},
    )


def limit_fixture_family():
    return step_family([1, 0, 1, 1, 0, 1, 0, 0], [0, 2, 1, 3, 0, 2, 4, 1],
                       note="limit-fixture")


def _build_limit_subbase(params: str) -> SpaceInstance:
    if params not in ("", "default"):
        raise KeyError(f"unknown limit-subbase fixture {params!r}")
    ls = limit_subbase_space(limit_fixture_family())
    return SpaceInstance(
        spec="limit-subbase:default",
        space=ls.space,
        relation=ls.relation,
        subbase=ls.subbase,
        subbase_relation=ls.subbase_relation,
        index_bound=24,
        extras={"ls": ls},
    )


BUILDERS: dict[str, tuple[str, Callable[..., SpaceInstance]]] = {
    "discrete": ("n (point count)", _build_discrete),
    "ordered": ("fixture: finite10|injection|injection-top|two-blocks|"
                "dense, or a loaded order name", _build_ordered),
    "hypersimple": ("default", _build_hypersimple),
    "pi01": ("alltrue|holes|parity", _build_pi01),
    "tychonoff": ("variant,side with variant basic|discrete and side 0|1",
                  _build_tychonoff),
    "deadend": ("full3|comb4|pair", _build_deadend),
    "limit-subbase": ("default", _build_limit_subbase),
}

_PREDS: dict[str, Callable[[int], bool]] = {
    "evens": lambda x: x % 2 == 0,
    "odds": lambda x: x % 2 == 1,
    "all": lambda x: True,
}


def _parse_pred(text: str) -> Callable[[int], bool]:
    if text in _PREDS:
        return _PREDS[text]
    if text.startswith("lt:"):
        k = int(text[3:])
        return lambda x: x < k
    raise KeyError(f"unknown subspace predicate {text!r}")


def resolve(spec: str,
            orders: dict[str, LinearOrder] | None = None) -> SpaceInstance:
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    if kind == "product":
        left_spec, sep, right_spec = rest.partition(";")
        if not sep:
            raise KeyError("product wants two specs joined by ';'")
        a = resolve(left_spec, orders)
        b = resolve(right_spec, orders)
        return product_instance(a, b)
    if kind == "subspace":
        inner_spec, sep, pred_text = rest.partition(";")
        if not sep:
            raise KeyError("subspace wants '<spec>;<pred>'")
        return subspace_instance(resolve(inner_spec, orders),
                                 _parse_pred(pred_text), pred_text)
    entry = BUILDERS.get(kind)
    if entry is None:
        raise KeyError(f"unknown space kind {kind!r}")
    builder = entry[1]
    if kind == "ordered":
        return builder(rest, orders)
    return builder(rest)


PRODUCT_SCALE = 8


def _factor_budgets(inst: SpaceInstance) -> tuple[int, int]:
    """Visible (point, index) window for one factor of a product.

    Discrete spaces need as many indices as points to stay covered; an
    ordered space is covered by the both-ways-unbounded interval, visible
    at any scale; closure-based spaces are covered by the empty family, so
    a handful of subbase indices keeps the rectangle count tame.  Dead-end
    point codes are sparse, so that factor keeps its own generous window.
    """
    kind = inst.spec.split(":", 1)[0]
    if kind == "discrete":
        return PRODUCT_SCALE, PRODUCT_SCALE
    if kind == "ordered":
        return PRODUCT_SCALE, 0
    if kind == "deadend":
        return inst.point_bound or PRODUCT_SCALE, 3
    return PRODUCT_SCALE, 3


def product_instance(a: SpaceInstance, b: SpaceInstance) -> SpaceInstance:
    space = product(a.space, b.space)
    (pa, ia), (pb, ib) = _factor_budgets(a), _factor_budgets(b)
    space = replace(
        space,
        point_iter=lambda bound: sorted(
            pair(x, y) for x in a.space.points(min(pa, bound))
            for y in b.space.points(min(pb, bound))),
        index_iter=lambda bound: sorted(
            pair(i, j) for i in a.space.indices(min(ia, bound))
            for j in b.space.indices(min(ib, bound))),
    )
    relation = None
    if a.relation is not None and b.relation is not None:
        relation = product_cover_relation_for(a, b, space)
    discrete = None
    hausdorff = None
    if a.discrete is not None and b.discrete is not None:
        da, db = a.discrete.d, b.discrete.d

        def d(p: int) -> int:
            x, y = unpair(p)
            return pair(da(x), db(y))

        discrete = DiscreteWitness(d=d)
        hausdorff = discrete_to_hausdorff(discrete)
    return SpaceInstance(
        spec=f"product:{a.spec};{b.spec}",
        space=space,
        relation=relation,
        discrete=discrete,
        hausdorff=hausdorff,
        point_bound=max(pa, pb),
        index_bound=max(ia, ib, 1),
        extras={"left": a, "right": b},
    )


def product_cover_relation_for(a: SpaceInstance, b: SpaceInstance,
                               space: SpaceBase) -> CoverRelation:
    from .covers import product_cover_relation
    return product_cover_relation(a.relation, b.relation, a.space, b.space,
                                  point_bound=32)


def subspace_instance(inner: SpaceInstance, pred: Callable[[int], bool],
                      pred_text: str) -> SpaceInstance:
    space = subspace(inner.space, pred,
                     name=f"subspace({inner.space.name};{pred_text})")
    return SpaceInstance(
        spec=f"subspace:{inner.spec};{pred_text}",
        space=space,
        discrete=inner.discrete,
        hausdorff=inner.hausdorff,
        point_bound=inner.point_bound,
        index_bound=inner.index_bound,
        extras={"inner": inner, "pred": pred_text},
    )


def builtin_specs() -> list[str]:
    """The registered fixture lineup, one spec per instance."""
    return [
        "discrete:10",
        "ordered:finite10",
        "ordered:injection",
        "ordered:injection-top",
        "ordered:two-blocks",
        "ordered:dense",
        "hypersimple:default",
        "pi01:alltrue",
        "pi01:holes",
        "pi01:parity",
        "tychonoff:basic,0",
        "tychonoff:basic,1",
        "tychonoff:discrete,0",
        "tychonoff:discrete,1",
        "deadend:full3",
        "deadend:comb4",
        "deadend:pair",
        "limit-subbase:default",
    ]


def fixture_subspace_specs() -> list[str]:
    return [
        "subspace:discrete:10;evens",
        "subspace:ordered:finite10;evens",
        "subspace:hypersimple:default;odds",
        "subspace:tychonoff:basic,1;evens",
        "subspace:limit-subbase:default;lt:32",
    ]


def listing(orders: dict[str, LinearOrder] | None = None) -> list[dict]:
    rows = [{"name": name, "params": doc}
            for name, (doc, _) in sorted(BUILDERS.items())]
    rows.append({"name": "product", "params": "<spec>;<spec>"})
    rows.append({"name": "subspace",
                 "params": "<spec>;evens|odds|all|lt:k"})
    if orders:
        for name in sorted(orders):
            rows.append({"name": f"ordered:{name}",
                         "params": "(loaded order)"})
    return rows


def load_order_file(path: str) -> dict[str, LinearOrder]:
    """JSON order file: {"orders": [{"name": ..., "values": [...]}]} where
    values is a permutation of 0..n-1 listed in increasing order position."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    out: dict[str, LinearOrder] = {}
    for entry in data.get("orders", []):
        name = entry["name"]
        values = [int(v) for v in entry["values"]]
        if sorted(values) != list(range(len(values))):
            raise ValueError(f"order {name!r} is not a permutation")
        out[name] = permutation_order(values)
    return out


def string_enumset(pred: Callable[[tuple[int, ...]], bool],
                   max_len: int = 6, note: str = "") -> EnumSet:
    """Desk slice of a set of binary strings: stage s holds the codes of
    every satisfying string of length <= min(s, max_len)."""

    def at(s: int) -> FinSet:
        top = min(s, max_len)
        codes = []
        for ln in range(top + 1):
            for bits in iproduct((0, 1), repeat=ln):
                if pred(bits):
                    codes.append(encode_bits(bits))
        return FinSet.of(codes)

    return EnumSet(stage_fn=at, note=note)


def generic_fixture_sets() -> list[EnumSet]:
    """Eight string sets for the finite-extension construction: five are
    met along the run, three end up avoided."""
    preds = [
        ("first-zero", lambda s: len(s) >= 1 and s[0] == 0),
        ("second-one", lambda s: len(s) >= 2 and s[1] == 1),
        ("repeat", lambda s: len(s) >= 3 and s[2] == s[1]),
        ("even-ones", lambda s: len(s) == 4 and sum(s) % 2 == 0),
        ("flip-ends", lambda s: len(s) >= 5 and s[4] == 1 - s[0]),
        ("first-one", lambda s: len(s) >= 1 and s[0] == 1),
        ("double-zero", lambda s: len(s) >= 2 and s[0] == 0 and s[1] == 0),
        ("all-ones", lambda s: len(s) >= 1 and all(b == 1 for b in s)),
    ]
    return [string_enumset(p, note=name) for name, p in preds]


def delayed_set(values: dict[int, list[int]], note: str = "") -> EnumSet:
    """Stage sets that grow at the listed stages and stay put between
    them."""
    steps = sorted(values)

    def at(s: int) -> FinSet:
        out: list[int] = []
        for step in steps:
            if step <= s:
                out.extend(values[step])
        return FinSet.of(out)

    return EnumSet(stage_fn=at, note=note)


def blocks_fixture() -> tuple[list[EnumSet], list[tuple[int, int]]]:
    """Three watched-set requirements for the stage machine.

    Labels come from the padding order: 6 sits at (1/4, 0), 15 at (3/8, 0),
    144 at (33/64, 0), 147 at (35/64, 0).  Requirement (1, 0) traps 6 and
    15 inside the block at 1/4; (0, 2) then traps 144 and 147 inside the
    lone eligible block 17/32 between them; (0, 1) watches the same points
    the wrong way round, so its premise never holds.  200 stages see both
    shifts.
    """
    W = [
        delayed_set({16: [15], 145: [144]}, note="W0"),
        delayed_set({7: [6]}, note="W1"),
        delayed_set({148: [147]}, note="W2"),
    ]
    return W, [(1, 0), (0, 2), (0, 1)]
