"""Sweep tables and figure rendering.

The report path runs the registry through the base validator and a seeded
cover sample, writes the results as CSV, and renders the figures next to
it.  The block machine gets its own pair of figures parsed straight from
the event log.
"""
from __future__ import annotations

import csv
import json
import random
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

from .config import RunConfig  # noqa: E402
from .covers import iter_index_families  # noqa: E402
from .pathologies import BlockMachineRun  # noqa: E402
from .registry import builtin_specs, resolve  # noqa: E402
from .spaces import validate_base  # noqa: E402

SAMPLE_FAMILIES = 40


def sweep_rows(cfg: RunConfig, specs: list[str] | None = None) -> list[dict]:
    rows = []
    for spec in specs or builtin_specs():
        inst = resolve(spec)
        pb = min(cfg.point_bound, inst.point_bound or cfg.point_bound)
        ib = min(cfg.point_bound, inst.index_bound or cfg.point_bound)
        base = validate_base(inst.space, pb, ib)
        row = {
            "spec": spec,
            "points": pb,
            "indices": ib,
            "base_ok": base.ok,
            "violations": len(base.violations),
            "relation": (inst.relation.exactness.name.lower()
                         if inst.relation else "none"),
            "covers": 0,
            "not_covers": 0,
            "unknown": 0,
        }
        if inst.relation is not None:
            rng = random.Random(cfg.seed)
            pool = [i for i in range(17) if inst.space.index_member(i)]
            fams = list(iter_index_families(pool, 3))
            rng.shuffle(fams)
            for fam in fams[:SAMPLE_FAMILIES]:
                got = inst.relation.decide(fam)
                if got.covers:
                    row["covers"] += 1
                elif got.status.name == "NOT_COVERS":
                    row["not_covers"] += 1
                else:
                    row["unknown"] += 1
        rows.append(row)
    return rows


def write_csv(rows: list[dict], path: str) -> None:
    if not rows:
        raise ValueError("nothing to write")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def _spec_axis(ax, labels: list[str]) -> None:
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=7)


def base_figure(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(9, 4))
    labels = [r["spec"] for r in rows]
    ax.bar(range(len(rows)), [r["violations"] for r in rows],
           color="#336699")
    _spec_axis(ax, labels)
    ax.set_ylabel("base-axiom violations")
    ax.set_title("validate_base at scale")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cover_figure(rows: list[dict], path: str) -> None:
    fig, ax = plt.subplots(figsize=(9, 4))
    labels = [r["spec"] for r in rows]
    xs = range(len(rows))
    covers = [r["covers"] for r in rows]
    nots = [r["not_covers"] for r in rows]
    unknowns = [r["unknown"] for r in rows]
    ax.bar(xs, covers, label="covers", color="#2a9d8f")
    ax.bar(xs, nots, bottom=covers, label="not covers", color="#e9c46a")
    ax.bar(xs, unknowns, bottom=[c + n for c, n in zip(covers, nots)],
           label="unknown", color="#e76f51")
    _spec_axis(ax, labels)
    ax.set_ylabel("sampled family decisions")
    ax.set_title("cover relation sample")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def blocks_figures(run: BlockMachineRun, outdir: str) -> list[str]:
    """Timeline of placed points with shift markers, plus the final block
    layout."""
    events = [json.loads(line) for line in run.log]
    per_stage: dict[int, int] = {}
    shifts: list[tuple[int, int]] = []
    stages = 0
    placed = 0
    for ev in events:
        kind = ev.get("event")
        if kind == "pad":
            placed += 1
            per_stage[ev["s"]] = placed
        elif kind == "stage":
            stages = max(stages, ev["s"] + 1)
            per_stage.setdefault(ev["s"], placed)
        elif kind == "shift":
            shifts.append((ev["s"], ev["code"]))

    out = Path(outdir)
    timeline = out / "blocks_timeline.png"
    fig, ax = plt.subplots(figsize=(8, 4))
    xs = sorted(per_stage)
    ax.plot(xs, [per_stage[s] for s in xs], color="#264653")
    for s, code in shifts:
        ax.axvline(s, color="#e76f51", linestyle="--", linewidth=1)
        ax.annotate(f"shift {code}", (s, per_stage[max(xs[0], s)]),
                    fontsize=7, rotation=90, va="bottom")
    ax.set_xlabel("stage")
    ax.set_ylabel("points placed")
    ax.set_title("stage machine growth")
    fig.tight_layout()
    fig.savefig(timeline, dpi=120)
    plt.close(fig)

    final = out / "blocks_final.png"
    fig, ax = plt.subplots(figsize=(8, 4))
    blocks = sorted(run.state.blocks.items())
    xs = [float(Fraction(d)) for d, _ in blocks]
    sizes = [len(blk) for _, blk in blocks]
    ax.bar(xs, sizes, width=0.01, color="#2a9d8f")
    ax.set_xlabel("block position in [0, 1]")
    ax.set_ylabel("points in block")
    ax.set_title("final block layout")
    fig.tight_layout()
    fig.savefig(final, dpi=120)
    plt.close(fig)
    return [str(timeline), str(final)]


def render_report(outdir: str, cfg: RunConfig,
                  blocks_run: BlockMachineRun | None = None) -> dict:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rows = sweep_rows(cfg)
    csv_path = out / "report.csv"
    write_csv(rows, str(csv_path))
    figures = []
    base_path = out / "base.png"
    base_figure(rows, str(base_path))
    figures.append(str(base_path))
    covers_path = out / "covers.png"
    cover_figure(rows, str(covers_path))
    figures.append(str(covers_path))
    if blocks_run is not None:
        figures.extend(blocks_figures(blocks_run, str(out)))
    return {
        "kind": "report",
        "rows": len(rows),
        "csv": str(csv_path),
        "figures": figures,
        "summary": {
            "base_ok": sum(1 for r in rows if r["base_ok"]),
            "spaces": len(rows),
        },
    }
