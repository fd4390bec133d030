"""FFT entry points with a package-wide worker-thread setting.

The worker count is taken from the WIGNER4D_THREADS environment variable at
import time; set_workers overrides it (the CLI --threads flag does this).
Transform results are bitwise independent of the worker count; threading only
splits the batch dimension.
"""

from __future__ import annotations

import os

import numpy as np
from scipy import fft as _sfft


def _initial_workers() -> int:
    raw = os.environ.get("WIGNER4D_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


_WORKERS = _initial_workers()


def set_workers(n: int | None) -> None:
    global _WORKERS
    _WORKERS = _initial_workers() if not n else max(1, int(n))


def get_workers() -> int:
    return _WORKERS


def fftn(a: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    return _sfft.fftn(a, axes=axes, workers=_WORKERS)


def ifftn(a: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    return _sfft.ifftn(a, axes=axes, workers=_WORKERS)
