"""Kernel backend selection.

Set ``SHARC_VQE_BACKEND=numpy`` to force the pure-numpy kernels; the default
uses numba when it imports cleanly.
"""
import os

_requested = os.environ.get("SHARC_VQE_BACKEND", "numba").strip().lower()

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA = _requested != "numpy" and _numba is not None
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` with caching on; identity decorator when numba is absent."""
    if _numba is None:
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)
