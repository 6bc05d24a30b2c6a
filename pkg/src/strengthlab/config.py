"""Run-wide defaults and the CLI run configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

DEFAULT_BUDGET = 1 << 34
DEFAULT_DELTA = 0.01
MAX_FIBERS = 1 << 20


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("STRENGTHLAB_THREADS", "1")))
    except ValueError:
        return 1


def resolve_threads(threads: int | None) -> int:
    return default_threads() if threads is None else max(1, int(threads))


def resolve_budget(budget: int | None) -> int:
    return DEFAULT_BUDGET if budget is None else int(budget)


@dataclass
class RunConfig:
    p: int = 2
    s: int = 1
    threads: int = field(default_factory=default_threads)
    budget: int = DEFAULT_BUDGET
    samples: int = 100_000
    delta: float = DEFAULT_DELTA
    seed: int = 0
    format: str = "json"
    inputs: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
