"""Numba on/off switch.

Set AFFSURF_DISABLE_NUMBA=1 to run every kernel on the pure numpy/python
path instead of compiling it.  Results are identical on both paths (see
tests/test_kernels.py); only speed differs (see benchmarks/bench_kernels.py).
"""
import os

NUMBA_ENABLED = os.environ.get("AFFSURF_DISABLE_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
