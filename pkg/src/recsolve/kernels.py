"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred when importable; setting the environment
variable ``RECSOLVE_PURE_PYTHON=1`` before import forces the fallback.
Backends agree on semantics but not on the last bits of floating-point
results (summation order differs), so cross-backend comparisons belong in
tolerance tests, never bitwise ones.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_compiled = None
if not os.environ.get("RECSOLVE_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled  # type: ignore[no-redef]
    except ImportError:
        _compiled = None

DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _compiled is not None else ("python",)


def get_backend(name: str | None = None) -> ModuleType:
    """Kernel module for ``name`` ('compiled' | 'python'; None = default)."""
    if name is None:
        name = DEFAULT_BACKEND
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel backend is not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")


def active() -> ModuleType:
    return get_backend(None)
