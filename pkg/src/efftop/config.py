"""Run-scale defaults shared by the library and the CLI.

Every semi-decidable question in this package is answered at a finite scale:
a point bound, a stage bound, an index search bound and an accumulation
window.  The numbers below are the desk defaults; commands accept overrides
and the environment variable EFFTOP_DEFAULTS may point at a JSON file whose
entries replace them.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace

DEFAULT_POINT_BOUND = 64
DEFAULT_STAGE_BOUND = 256
DEFAULT_SEARCH_BOUND = 64
DEFAULT_WINDOW = 32  # stage bound / 8
DEFAULT_SEED = 0

ENV_DEFAULTS = "EFFTOP_DEFAULTS"


@dataclass(frozen=True)
class RunConfig:
    """Bounds for one run: points <= N, stages <= S, index searches, window."""

    point_bound: int = DEFAULT_POINT_BOUND
    stage_bound: int = DEFAULT_STAGE_BOUND
    search_bound: int = DEFAULT_SEARCH_BOUND
    window: int = DEFAULT_WINDOW
    seed: int = DEFAULT_SEED

    def bounds_dict(self) -> dict:
        return {
            "points": self.point_bound,
            "stages": self.stage_bound,
            "search": self.search_bound,
            "window": self.window,
        }


def load_default_config() -> RunConfig:
    """Config from EFFTOP_DEFAULTS if set and readable, else the constants."""
    cfg = RunConfig()
    path = os.environ.get(ENV_DEFAULTS)
    if not path:
        return cfg
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return cfg
    fields = {}
    for key in ("point_bound", "stage_bound", "search_bound", "window", "seed"):
        if key in data and isinstance(data[key], int):
            fields[key] = data[key]
    return replace(cfg, **fields)
