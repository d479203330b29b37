"""Backend selection for the hot kernels.

Two interchangeable kernel implementations exist: a numba-jitted one and a
pure-numpy fallback.  The active one is picked by the APNLAB_BACKEND
environment variable ("numba", "numpy" or "auto", default "auto": numba if
importable, else numpy).  set_backend() overrides the choice at runtime,
which is what the equivalence tests and the benchmark script use.
"""

import os

_VALID = ("auto", "numba", "numpy")

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

_backend = None


def _resolve(name):
    if name not in _VALID:
        raise ValueError(f"unknown backend {name!r}, expected one of {_VALID}")
    if name == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return name


def active_backend():
    """Name of the kernel implementation in use ("numba" or "numpy")."""
    global _backend
    if _backend is None:
        _backend = _resolve(os.environ.get("APNLAB_BACKEND", "auto"))
    return _backend


def set_backend(name):
    """Force a backend ("numba", "numpy" or "auto"). Returns the previous name."""
    global _backend
    prev = _backend
    _backend = _resolve(name)
    return prev


def kernels():
    """Return the active kernel module."""
    if active_backend() == "numba":
        from apnlab import _kernels_numba
        return _kernels_numba
    from apnlab import _kernels_numpy
    return _kernels_numpy
