"""Optional numba acceleration; ``SUPERINT_NO_NUMBA=1`` selects the plain numpy path."""

from __future__ import annotations

import os

ENABLED = os.environ.get("SUPERINT_NO_NUMBA", "") not in ("1", "true", "yes")

if ENABLED:
    try:
        import numba as _numba
    except ImportError:  # pragma: no cover
        ENABLED = False

if ENABLED:
    def jit(fn):
        return _numba.njit(cache=True)(fn)

    def set_threads(n: int) -> None:
        _numba.set_num_threads(max(1, min(int(n), _numba.config.NUMBA_NUM_THREADS)))
else:
    def jit(fn):
        return fn

    def set_threads(n: int) -> None:
        return None


def backend() -> str:
    return "numba" if ENABLED else "numpy"
