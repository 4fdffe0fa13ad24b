"""Numba switch.

Kernels are written once as plain Python over numpy arrays.  When numba is
importable and ``UVQC_DISABLE_NUMBA`` is unset (or ``0``), they are compiled
with ``njit``; otherwise callers use the vectorised numpy path instead.
"""
from __future__ import annotations

import os

_flag = os.environ.get("UVQC_DISABLE_NUMBA", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError("numba disabled by UVQC_DISABLE_NUMBA")
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:
    _njit = None
    HAS_NUMBA = False


def njit(func):
    """Compile ``func`` with numba when available, else return it unchanged."""
    if HAS_NUMBA:
        return _njit(cache=True, nogil=True)(func)
    return func
