"""Numba dispatch shim.

Kernels are written against the numpy subset numba understands, so the same
source runs compiled or as plain Python. Set ``STREAMDIST_DISABLE_NUMBA=1``
to force the pure-numpy path (useful for debugging and for the benchmark).
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FALSY = {"", "0", "false", "no", "off"}

DISABLED_BY_ENV = os.environ.get("STREAMDIST_DISABLE_NUMBA", "").strip().lower() not in _FALSY
USE_NUMBA = numba is not None and not DISABLED_BY_ENV


def njit(f=None, **options):
    """``numba.njit`` when acceleration is enabled, identity otherwise."""
    options.setdefault("cache", True)

    def wrap(func):
        if USE_NUMBA:
            return numba.njit(func, **options)
        return func

    if f is None:
        return wrap
    return wrap(f)


def python_version(kernel):
    """Return the uncompiled Python function behind ``kernel``."""
    return getattr(kernel, "py_func", kernel)
