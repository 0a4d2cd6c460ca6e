"""Numba dispatch.

Hot kernels are compiled with ``numba.njit`` when numba is importable and the
environment variable ``ORBIT_SITE_NUMBA`` is not set to a false value
(``0``, ``false``, ``no``, ``off``).  Otherwise the pure-numpy twins in
:mod:`orbitsite.kernels` are used.
"""

from __future__ import annotations

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_FALSE = {"0", "false", "no", "off"}


def numba_requested() -> bool:
    return os.environ.get("ORBIT_SITE_NUMBA", "1").strip().lower() not in _FALSE


def use_numba() -> bool:
    """True when kernels should dispatch to their compiled variants."""
    return HAVE_NUMBA and numba_requested()


def njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn
