"""Scalar field abstraction: real64 and complex128 arithmetic helpers.

Every other module is generic over these two fields through numpy dtypes.
Inner products conjugate the left argument, so the real instantiation is the
ordinary dot product and the complex one is a strict generalization.
"""
from __future__ import annotations

import numpy as np

REAL = np.dtype(np.float64)
COMPLEX = np.dtype(np.complex128)
FIELD_DTYPES = (REAL, COMPLEX)

#: Unit roundoff of binary64; anchors every tolerance in the package.
MACHINE_EPS = float(np.finfo(np.float64).eps)

#: Smallest positive normal binary64 number; floor for relative tests.
TINY = float(np.finfo(np.float64).tiny)


class ZeroMagnitudeDivision(ZeroDivisionError):
    """Division by a scalar of magnitude zero."""


def magnitude(s) -> float:
    """|s| as a nonnegative real, for either field."""
    return float(abs(s))


def conjugate(s):
    return np.conjugate(s)


def checked_div(a, b):
    """a / b, raising instead of silently producing inf/nan when |b| == 0."""
    if magnitude(b) == 0.0:
        raise ZeroMagnitudeDivision("division by scalar of magnitude zero")
    return a / b


def field_dtype(dtype) -> np.dtype:
    """Map an input dtype onto one of the two supported fields.

    Integers and lower-precision floats promote to float64; any complex input
    promotes to complex128. Everything else is rejected.
    """
    dt = np.dtype(dtype)
    if dt.kind in "iuf" or dt.kind == "b":
        return REAL
    if dt.kind == "c":
        return COMPLEX
    raise TypeError(f"unsupported scalar dtype {dt!r}; expected real or complex")


def is_complex_dtype(dtype) -> bool:
    return np.dtype(dtype).kind == "c"


def as_field_array(a, dtype=None) -> np.ndarray:
    """Coerce ``a`` to a C-contiguous float64 or complex128 array."""
    arr = np.asarray(a)
    target = field_dtype(arr.dtype if dtype is None else dtype)
    return np.ascontiguousarray(arr, dtype=target)


def result_dtype(*arrays) -> np.dtype:
    """Common field of several arrays (complex wins over real)."""
    if any(np.dtype(getattr(a, "dtype", np.float64)).kind == "c" for a in arrays):
        return COMPLEX
    return REAL
