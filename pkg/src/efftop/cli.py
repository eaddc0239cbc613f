"""Command surface: list, check, subcover, blocks, report.

Exit codes are a stable contract: 0 success, 1 a property violation was
found, 2 the question stayed open at the bounds, 3 usage error.  Scale
flags override the defaults, which in turn may come from a JSON file named
by EFFTOP_DEFAULTS.
"""
from __future__ import annotations

import json
from dataclasses import replace

import click

from .config import RunConfig, load_default_config
from .covers import (
    AlexanderCertificate,
    BoundedUnknown,
    SubcoverCertificate,
    alexander_wkl_subcover,
    cofinite_point_subcover,
    cover_check_bruteforce,
    iter_index_families,
    minimal_cover_search,
    loeb_product_subcover,
)
from .coding import pair3
from .foundations import FinSet, PredicateKind, StagePredicate
from .pathologies import (
    block_machine_run,
    check_invariants,
    tychonoff_noncover_witness,
)
from .registry import (
    SpaceInstance,
    blocks_fixture,
    listing,
    load_order_file,
    resolve,
)
from .report import render_report
from .separation import validate_discrete_witness, validate_hausdorff_witness
from .serialize import dump_report, load_cover_spec, load_w_spec
from .spaces import ValidationReport, point_masks, validate_base

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_UNKNOWN = 2
EXIT_USAGE = 3

CHECK_NAMES = ("base", "discrete", "hausdorff", "cover-agreement")


def _scale_options(fn):
    fn = click.option("--points", type=int, default=None,
                      help="point bound N")(fn)
    fn = click.option("--stages", type=int, default=None,
                      help="stage bound S")(fn)
    fn = click.option("--search-bound", type=int, default=None,
                      help="index search bound")(fn)
    fn = click.option("--window", type=int, default=None,
                      help="accumulation window")(fn)
    fn = click.option("--seed", type=int, default=None,
                      help="seed for sampled checks")(fn)
    return fn


def _config(points, stages, search_bound, window, seed) -> RunConfig:
    cfg = load_default_config()
    overrides = {}
    if points is not None:
        overrides["point_bound"] = points
    if stages is not None:
        overrides["stage_bound"] = stages
    if search_bound is not None:
        overrides["search_bound"] = search_bound
    if window is not None:
        overrides["window"] = window
    if seed is not None:
        overrides["seed"] = seed
    cfg = replace(cfg, **overrides)
    for name, value in cfg.bounds_dict().items():
        if value < 1:
            raise click.UsageError(f"bound {name} must be >= 1")
    return cfg


def _emit(payload: dict, as_json: bool, out: str | None,
          text: str) -> None:
    if as_json or out:
        rendered = dump_report(payload, out)
        if as_json:
            click.echo(rendered)
            return
    click.echo(text)


def _usage(err: BaseException) -> click.UsageError:
    msg = err.args[0] if err.args else str(err)
    return click.UsageError(str(msg))


def _instance_bounds(inst: SpaceInstance, cfg: RunConfig,
                     points: int | None = None) -> tuple[int, int]:
    """Window for one instance: its curated bounds, unless --points was
    given explicitly."""
    pb = inst.point_bound if inst.point_bound is not None else cfg.point_bound
    ib = inst.index_bound if inst.index_bound is not None else cfg.point_bound
    if points is not None:
        pb = points
    return pb, ib


@click.group()
def cli() -> None:
    """Desk-scale checks for countable second-countable spaces."""


@cli.command(name="list")
@click.option("--orders", "orders_path", type=click.Path(exists=True),
              default=None, help="JSON file of extra orders")
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_list(orders_path, as_json, out) -> int:
    """Print the registered space kinds and their parameter schemas."""
    orders = load_order_file(orders_path) if orders_path else None
    rows = listing(orders)
    payload = {"kind": "listing", "rows": rows}
    width = max(len(r["name"]) for r in rows)
    text = "\n".join(f"{r['name']:<{width}}  {r['params']}" for r in rows)
    _emit(payload, as_json, out, text)
    return EXIT_OK


def _agreement_report(inst: SpaceInstance, cfg: RunConfig,
                      pb: int) -> ValidationReport:
    """Sampled relation-vs-bruteforce comparison.

    A COVERS answer contradicted by a visibly uncovered point is always a
    violation, as is a NOT_COVERS witness that the family visibly covers.
    """
    report = ValidationReport(subject=f"cover-agreement({inst.spec})",
                              bounds={"points": pb, "indices": 16})
    pool = [i for i in range(17) if inst.space.index_member(i)]
    for fam in iter_index_families(pool, 2):
        got = inst.relation.decide(fam)
        if got.status.name == "UNKNOWN":
            continue
        brute = cover_check_bruteforce(inst.space, fam, pb)
        if got.covers and not brute.covers:
            report.add("claimed-cover", family=list(fam),
                       uncovered=brute.witness)
        elif not got.covers:
            w = got.witness
            if w is not None and inst.space.point_member(w) and any(
                    inst.space.basic_member(w, i) for i in fam):
                report.add("bad-witness", family=list(fam), witness=w)
    return report


@cli.command(name="check")
@click.argument("spacespec")
@click.option("--checks", multiple=True,
              type=click.Choice(CHECK_NAMES),
              help="subset of checks; default runs the applicable ones")
@click.option("--orders", "orders_path", type=click.Path(exists=True),
              default=None)
@_scale_options
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_check(spacespec, checks, orders_path, points, stages, search_bound,
              window, seed, as_json, out) -> int:
    """Run validators against one space and report each counterexample."""
    cfg = _config(points, stages, search_bound, window, seed)
    orders = load_order_file(orders_path) if orders_path else None
    try:
        inst = resolve(spacespec, orders)
    except KeyError as err:
        raise _usage(err)
    pb, ib = _instance_bounds(inst, cfg, points)

    selected = list(checks)
    if not selected:
        selected = ["base"]
        if inst.discrete is not None:
            selected.append("discrete")
        if inst.hausdorff is not None:
            selected.append("hausdorff")
        if inst.relation is not None:
            selected.append("cover-agreement")

    reports: dict[str, ValidationReport] = {}
    for name in selected:
        if name == "base":
            reports[name] = validate_base(inst.space, pb, ib)
        elif name == "discrete":
            if inst.discrete is None:
                raise click.UsageError(
                    f"{spacespec} carries no discreteness witness")
            reports[name] = validate_discrete_witness(inst.space,
                                                      inst.discrete, pb)
        elif name == "hausdorff":
            if inst.hausdorff is None:
                raise click.UsageError(
                    f"{spacespec} carries no Hausdorff witness")
            reports[name] = validate_hausdorff_witness(inst.space,
                                                       inst.hausdorff, pb)
        else:
            if inst.relation is None:
                raise click.UsageError(
                    f"{spacespec} carries no cover relation")
            reports[name] = _agreement_report(inst, cfg, pb)

    code = EXIT_OK if all(r.ok for r in reports.values()) else EXIT_VIOLATION
    payload = {
        "kind": "check",
        "spec": inst.spec,
        "exit": code,
        "checks": {name: r.to_json() for name, r in reports.items()},
    }
    lines = []
    for name, r in reports.items():
        if r.ok:
            lines.append(f"{name}: ok {r.bounds}")
        else:
            lines.append(f"{name}: {len(r.violations)} violation(s)")
            lines.extend(f"  {v}" for v in r.violations[:10])
    _emit(payload, as_json, out, "\n".join(lines))
    return code


def _subcover_result_exit(result) -> int:
    if isinstance(result, (SubcoverCertificate, AlexanderCertificate)):
        return EXIT_OK if result.verified else EXIT_VIOLATION
    if isinstance(result, BoundedUnknown):
        return EXIT_UNKNOWN
    # InfiniteBranch and FailurePoint are verified refutations
    return EXIT_VIOLATION


def _run_search(inst, cover, cfg, pb):
    if cover["kind"] != "stages":
        raise click.UsageError("search wants a 'stages' cover file")
    visible = cover["code"].stage(cfg.stage_bound)
    pts = inst.space.points(pb)
    masks = point_masks(inst.space, pts, visible)
    target = (1 << len(pts)) - 1
    chosen = minimal_cover_search(target, sorted(masks.items()),
                                  max_size=8)
    bounds = {"points": pb, "stages": cfg.stage_bound}
    if chosen is None:
        return BoundedUnknown("no covering subfamily at bound", bounds)
    check = cover_check_bruteforce(inst.space, chosen, pb)
    return SubcoverCertificate(chosen=chosen, bounds=bounds,
                               verified=check.covers, method="search")


def _run_loeb(inst, cover, cfg, pb):
    left = inst.extras.get("left")
    right = inst.extras.get("right")
    if left is None or right is None:
        raise click.UsageError("loeb wants a product space spec")
    if right.relation is None:
        raise click.UsageError("loeb needs a cover relation on the right "
                               "factor")
    if cover["kind"] != "stages":
        raise click.UsageError("loeb wants a 'stages' cover file of "
                               "rectangle indices")
    return loeb_product_subcover(
        left.space, right.space, right.relation, cover["code"],
        point_bound=min(pb, cfg.point_bound),
        stage_bound=cfg.stage_bound,
        search_bound=cfg.search_bound)


def _run_alexander(inst, cover, cfg, pb):
    if inst.subbase is None or inst.subbase_relation is None:
        raise click.UsageError("alexander needs a space built from a "
                               "subbase with its own relation")
    if cover["kind"] != "families":
        raise click.UsageError("alexander wants a 'families' cover file")
    return alexander_wkl_subcover(inst.subbase, inst.subbase_relation,
                                  cover["families"],
                                  depth_bound=cfg.search_bound,
                                  point_bound=pb)


def _run_cofinite(inst, cover, cfg, pb, ib, anchor):
    selector = StagePredicate(
        fn=lambda i, s: inst.space.index_member(i),
        kind=PredicateKind.RAW, note="any valid index")
    try:
        return cofinite_point_subcover(inst.space, selector, anchor, pb,
                                       ib, cfg.stage_bound)
    except ValueError as err:
        raise click.UsageError(f"cofinite method inapplicable: {err}")


@cli.command(name="subcover")
@click.argument("spacespec")
@click.argument("coverfile", type=click.Path(exists=True))
@click.option("--method", type=click.Choice(["search", "loeb", "alexander",
                                             "cofinite"]),
              required=True)
@click.option("--anchor", type=int, default=0,
              help="anchor point for the cofinite method")
@click.option("--orders", "orders_path", type=click.Path(exists=True),
              default=None)
@_scale_options
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_subcover(spacespec, coverfile, method, anchor, orders_path, points,
                 stages, search_bound, window, seed, as_json, out) -> int:
    """Extract a finite subcover certificate, or report why none was
    found."""
    cfg = _config(points, stages, search_bound, window, seed)
    orders = load_order_file(orders_path) if orders_path else None
    try:
        inst = resolve(spacespec, orders)
    except KeyError as err:
        raise _usage(err)
    cover = load_cover_spec(coverfile)
    pb, ib = _instance_bounds(inst, cfg, points)

    if method == "search":
        result = _run_search(inst, cover, cfg, pb)
    elif method == "loeb":
        result = _run_loeb(inst, cover, cfg, pb)
    elif method == "alexander":
        result = _run_alexander(inst, cover, cfg, pb)
    else:
        result = _run_cofinite(inst, cover, cfg, pb, ib, anchor)

    code = _subcover_result_exit(result)
    payload = {
        "kind": "subcover",
        "spec": inst.spec,
        "method": method,
        "exit": code,
        "result": result,
    }

    if method == "loeb" and not isinstance(result, SubcoverCertificate):
        noncover = _tychonoff_noncover(inst, cfg)
        if noncover is not None:
            payload["noncover"] = noncover

    text = json.dumps(result.to_json(), sort_keys=True)
    _emit(payload, as_json, out, f"{method}: exit {code}\n{text}")
    return code


def _tychonoff_noncover(inst, cfg):
    """When a failed loeb run was over the two sides of one limit family,
    the diagonal witness explains the failure."""
    left = inst.extras.get("left")
    right = inst.extras.get("right")
    if left is None or right is None:
        return None
    lp, rp = left.extras.get("pair"), right.extras.get("pair")
    if lp is None or rp is None or lp.family is not rp.family:
        return None
    if left.extras.get("side") != 0 or right.extras.get("side") != 1:
        return None
    triples = FinSet.of(pair3(x, y0, y1)
                        for x in range(6)
                        for y0 in range(x + 1) for y1 in range(x + 1))
    return tychonoff_noncover_witness(lp.family, triples,
                                      check_bound=cfg.stage_bound)


@cli.command(name="blocks")
@click.argument("wspecfile", type=click.Path(exists=True), required=False)
@click.option("--stages", type=int, default=None,
              help="stage count override")
@click.option("--replay", "replay_path", type=click.Path(exists=True),
              default=None, help="verify byte-identical re-execution")
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", type=click.Path(), default=None,
              help="write the JSONL log here")
def cmd_blocks(wspecfile, stages, replay_path, as_json, out) -> int:
    """Run the stage machine on a watched-set file (default: the shipped
    fixture) and emit its event log."""
    if wspecfile:
        try:
            spec = load_w_spec(wspecfile)
        except (ValueError, KeyError) as err:
            raise click.UsageError(f"bad watched-set file: {err}")
        W, reqs = spec["W"], spec["requirements"]
        run_stages = stages or spec["stages"]
        cap = spec["cap"]
    else:
        W, reqs = blocks_fixture()
        run_stages = stages or 200
        cap = None

    invariant_failures: list[str] = []

    def on_stage(state) -> None:
        bad = check_invariants(state)
        if bad:
            invariant_failures.append(
                f"stage {state.stage}: " + "; ".join(bad))

    kwargs = {"requirements": reqs, "on_stage": on_stage}
    if cap is not None:
        kwargs["cap"] = cap
    try:
        run = block_machine_run(W, run_stages, **kwargs)
    except ValueError as err:
        raise click.UsageError(f"watched-set precondition violated: {err}")

    log_text = run.log_text()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(log_text)

    code = EXIT_OK
    replay_matched = None
    if replay_path:
        with open(replay_path, "r", encoding="utf-8") as fh:
            replay_matched = fh.read() == log_text
        if not replay_matched:
            code = EXIT_VIOLATION
    if invariant_failures:
        code = EXIT_VIOLATION

    payload = {
        "kind": "blocks",
        "stages": run_stages,
        "cap": run.state.cap,
        "statuses": [run.statuses[c].to_json()
                     for c in sorted(run.statuses)],
        "log_lines": len(run.log),
    }
    if out:
        payload["log_path"] = out
    if replay_matched is not None:
        payload["replay_matched"] = replay_matched

    if as_json:
        _emit(payload, True, None, "")
    elif not out:
        click.echo(log_text, nl=False)
    else:
        statuses = ", ".join(
            f"{run.statuses[c].pair}:{run.statuses[c].state}"
            for c in sorted(run.statuses))
        click.echo(f"log: {out} ({len(run.log)} lines); {statuses}")
    for line in invariant_failures[:5]:
        click.echo(f"invariant: {line}", err=True)
    return code


@cli.command(name="report")
@click.option("--out", type=click.Path(), default="efftop-report",
              help="output directory")
@_scale_options
@click.option("--json", "as_json", is_flag=True)
def cmd_report(out, points, stages, search_bound, window, seed,
               as_json) -> int:
    """Sweep the registry, write the CSV, and render the figures."""
    cfg = _config(points, stages, search_bound, window, seed)
    W, reqs = blocks_fixture()
    run = block_machine_run(W, min(cfg.stage_bound, 120),
                            requirements=reqs)
    payload = render_report(out, cfg, blocks_run=run)
    text = (f"wrote {payload['csv']} and {len(payload['figures'])} "
            f"figure(s) under {out}")
    _emit(payload, as_json, None, text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        result = cli.main(args=argv, standalone_mode=False)
    except click.UsageError as err:
        click.echo(f"error: {err.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as err:
        err.show()
        return EXIT_USAGE
    except (KeyError, ValueError, OSError) as err:
        click.echo(f"error: {err}", err=True)
        return EXIT_USAGE
    return int(result) if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
