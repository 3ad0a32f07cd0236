"""Numba switch.

Set ``SCALESCOPE_DISABLE_NUMBA=1`` to run every kernel through its pure
numpy fallback. When numba is not importable the fallback is used as well.
"""
import os

_DISABLED = os.environ.get("SCALESCOPE_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled by SCALESCOPE_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        # bare @njit and @njit(...) both pass through
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrapper(f):
            return f

        return wrapper


BACKEND = "numba" if HAVE_NUMBA else "numpy"
