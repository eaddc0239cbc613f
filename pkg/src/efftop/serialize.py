"""JSON shapes shared by the command surface and the test drivers.

Every report carries a "kind" discriminator and must validate against the
shipped schema.json.  Input files (watched-set specs, cover specs) are
plain JSON with small, documented layouts.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .covers import CoverDecision
from .foundations import EnumSet, FinSet
from .spaces import OpenCode


def decision_json(d: CoverDecision) -> dict:
    out: dict[str, Any] = {"status": d.status.name}
    if d.witness is not None:
        out["witness"] = d.witness
    if d.detail:
        out["detail"] = d.detail
    return out


def to_jsonable(obj: Any) -> Any:
    """Best-effort conversion for report payload leaves."""
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, CoverDecision):
        return decision_json(obj)
    if isinstance(obj, FinSet):
        return list(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def dump_report(payload: dict, out: str | None) -> str:
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    return text


def load_schema() -> dict:
    with open(Path(__file__).with_name("schema.json"),
              encoding="utf-8") as fh:
        return json.load(fh)


def stage_table_enumset(table: dict[str, list[int]],
                        note: str = "") -> EnumSet:
    """{"stage": [values]} JSON table as a cumulative stage set."""
    steps = {int(k): [int(v) for v in vals] for k, vals in table.items()}
    order = sorted(steps)

    def at(s: int) -> FinSet:
        out: list[int] = []
        for step in order:
            if step <= s:
                out.extend(steps[step])
        return FinSet.of(out)

    return EnumSet(stage_fn=at, note=note)


def load_w_spec(path: str) -> dict:
    """Watched-set file for the stage machine.

    Layout: {"sets": [{"<stage>": [labels], ...}, ...],
             "requirements": [[e, f], ...], "stages": n, "cap": n?}.
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "sets" not in data or "stages" not in data:
        raise ValueError("watched-set file needs 'sets' and 'stages'")
    W = [stage_table_enumset(tbl, note=f"W{k}")
         for k, tbl in enumerate(data["sets"])]
    reqs = [tuple(int(v) for v in r) for r in data.get("requirements", [])]
    for r in reqs:
        if len(r) != 2 or not all(0 <= v < len(W) for v in r):
            raise ValueError(f"requirement {r} does not name two sets")
    return {
        "W": W,
        "requirements": reqs or None,
        "stages": int(data["stages"]),
        "cap": int(data["cap"]) if "cap" in data else None,
    }


def load_cover_spec(path: str) -> dict:
    """Cover file: either an open code by stages or a family sequence.

    {"kind": "stages", "stages": {"<stage>": [indices]}} |
    {"kind": "families", "families": [[indices], ...]}
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    kind = data.get("kind")
    if kind == "stages":
        code = OpenCode(stage_table_enumset(data["stages"], note=path))
        return {"kind": "stages", "code": code}
    if kind == "families":
        fams = [FinSet.of(int(i) for i in fam) for fam in data["families"]]
        return {"kind": "families", "families": fams}
    raise ValueError("cover file kind must be 'stages' or 'families'")
