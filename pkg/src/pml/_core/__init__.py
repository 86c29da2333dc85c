"""Numeric core with a compiled fast path and a numpy fallback.

The compiled extension (``pml._core._speedups``) is used when it imports
cleanly; otherwise the numpy implementation takes over.  Selection can be
forced with the environment variable ``PML_BACKEND`` set to ``python`` or
``cython`` (``auto`` is the default behaviour).
"""

import os

import numpy as np

from . import _pure


def _select():
    requested = os.environ.get("PML_BACKEND", "auto").strip().lower() or "auto"
    if requested not in ("auto", "python", "cython"):
        raise ValueError(
            f"PML_BACKEND must be 'auto', 'python' or 'cython', got {requested!r}"
        )
    if requested in ("auto", "cython"):
        try:
            from . import _speedups

            return _speedups, "cython"
        except ImportError:
            if requested == "cython":
                raise ImportError(
                    "PML_BACKEND=cython requested but the compiled extension is "
                    "not available; build it with 'python setup.py build_ext --inplace'"
                )
    return _pure, "python"


_impl, BACKEND = _select()


def backend() -> str:
    """Name of the active backend, ``"cython"`` or ``"python"``."""
    return BACKEND


def _dispatch(fn, x):
    arr = np.asarray(x, dtype=np.float64)
    flat = np.ascontiguousarray(arr.ravel())
    out = fn(flat)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def erf(x):
    """Error function of a scalar or array."""
    return _dispatch(_impl.erf, x)


def dawson(x):
    """Dawson integral of a scalar or array."""
    return _dispatch(_impl.dawson, x)


def k2(x):
    """(2/pi) * int_0^|x| D(y) dy for a scalar or array."""
    return _dispatch(_impl.k2, x)
