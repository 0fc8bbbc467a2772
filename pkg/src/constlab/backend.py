"""Kernel backend selection.

The compiled kernels are used when importable, unless ``CONSTLAB_BACKEND``
is set to ``python``.  ``CONSTLAB_THREADS`` sets the OpenMP thread count
(default: all cores).  Problems outside the compiled range (n > 6, or integer
weights that could overflow int64) always go to the Python kernels.
"""

from __future__ import annotations

import os

from constlab import _pykernels

_COMPILED_MAX_N = 6
_WEIGHT_LIMIT = 1 << 62

try:
    if os.environ.get("CONSTLAB_BACKEND", "").lower() == "python":
        raise ImportError("python backend requested")
    from constlab import _kernels as _compiled
except ImportError:
    _compiled = None

NAME = _compiled.NAME if _compiled is not None else _pykernels.NAME


def threads() -> int:
    raw = os.environ.get("CONSTLAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def has_compiled() -> bool:
    return _compiled is not None


def kernels(n: int, weight_rows=(), force: str | None = None):
    """Kernel module for a problem with ``n`` voters and the given weights."""
    if force == "python":
        return _pykernels
    if force == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if _compiled is None or n > _COMPILED_MAX_N:
        return _pykernels
    for row in weight_rows:
        if sum(row) >= _WEIGHT_LIMIT:
            return _pykernels
    return _compiled
