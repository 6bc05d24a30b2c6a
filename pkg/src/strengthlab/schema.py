"""Access to the JSON schemas shipped with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

NAMES = ("bias_report", "search_report", "certificate", "variety_report", "fibers",
         "span_rank", "generator_sidecar", "suite_report")


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}")
    text = resources.files("strengthlab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
