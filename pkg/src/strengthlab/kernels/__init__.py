"""Enumeration kernels: compiled core with a numpy fallback.

The compiled backend is used when the extension imports; set
``STRENGTHLAB_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from types import ModuleType
from typing import Callable

import numpy as np

from . import _pykernels
from .compiled import CompiledFamily, compile_family

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def _default_name() -> str:
    requested = os.environ.get("STRENGTHLAB_BACKEND")
    if requested:
        if requested not in _BACKENDS:
            raise ImportError(f"kernel backend {requested!r} is not available")
        return requested
    return "cython" if "cython" in _BACKENDS else "python"


DEFAULT_BACKEND = _default_name()


def get_backend(name: str | None = None) -> ModuleType:
    return _BACKENDS[name or DEFAULT_BACKEND]


# shards are a fixed function of the domain, never of the thread count
SHARD_TARGET = 1 << 16


def shard_bounds(total: int, q: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` (total a power of q) into q-power aligned shards."""
    size = 1
    while size < SHARD_TARGET and size < total:
        size *= q
    size = min(size, total) or 1
    return [(a, min(total, a + size)) for a in range(0, total, size)]


def run_sharded(fn: Callable[[int, int], object], bounds, threads: int = 1) -> list:
    """Apply ``fn`` to every shard; results come back in shard order."""
    if threads <= 1 or len(bounds) <= 1:
        return [fn(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: fn(*ab), bounds))


def sum_arrays(parts: list) -> np.ndarray:
    acc = parts[0].copy()
    for part in parts[1:]:
        acc += part
    return acc


__all__ = [
    "CompiledFamily",
    "compile_family",
    "available_backends",
    "get_backend",
    "DEFAULT_BACKEND",
    "shard_bounds",
    "run_sharded",
    "sum_arrays",
]
