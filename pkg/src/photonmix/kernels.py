"""Backend selection for the hot kernels.

The compiled Cython module is used when importable; otherwise (or when the
environment variable ``PHOTONMIX_PURE_PYTHON`` is set to a non-empty value)
the pure-Python implementation is used.  ``BACKEND`` names the active one.
"""
import os

from photonmix import _kernels_py

if os.environ.get("PHOTONMIX_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from photonmix import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

hermite_function = _impl.hermite_function
branch_walk = _impl.branch_walk
penalty_scan = _impl.penalty_scan


def backends():
    """Return ``{name: module}`` for every importable backend."""
    found = {"python": _kernels_py}
    try:
        from photonmix import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
