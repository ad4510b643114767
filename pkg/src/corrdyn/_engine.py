"""Kernel engine selection.

The compiled extension is preferred; the pure-Python module is the
fallback.  ``CORRDYN_KERNEL=py|cy`` forces a choice at import time, and
``load('python'|'cython')`` fetches a specific engine (used by the
benchmark and the parity tests).  Both engines classify bit-identically.
"""

from __future__ import annotations

import os


def load(name: str):
    key = name.strip().lower()
    if key in ("py", "python"):
        from . import _kernels_py
        return _kernels_py
    if key in ("cy", "cython"):
        from . import _kernels_cy
        return _kernels_cy
    raise ValueError(f"unknown kernel engine {name!r}")


def _select():
    forced = os.environ.get("CORRDYN_KERNEL", "").strip().lower()
    if forced in ("py", "python"):
        return load("python"), "python"
    if forced in ("cy", "cython"):
        return load("cython"), "cython"
    if forced:
        raise ValueError(f"CORRDYN_KERNEL={forced!r}: expected 'py' or 'cy'")
    try:
        return load("cython"), "cython"
    except ImportError:
        return load("python"), "python"


_KERNELS, _BACKEND = _select()


def get_kernels(engine: str | None = None):
    return _KERNELS if engine is None else load(engine)


def backend_name() -> str:
    return _BACKEND
