"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``CHAOSBOUND_PURE_PYTHON=1`` to force the fallback.  Grids too large
for 64-bit arithmetic are always routed to the Python implementation.
"""

from __future__ import annotations

import os

from . import _kernels_py
from ._kernels_py import OrbitBudgetExceeded

__all__ = [
    "BACKEND",
    "OrbitBudgetExceeded",
    "plateau_orbit_points",
    "open_orbit_points",
    "cylinder_counts",
]

_ext = None
if not os.environ.get("CHAOSBOUND_PURE_PYTHON"):
    try:
        from . import _kernels as _ext  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        _ext = None

BACKEND = "cython" if _ext is not None else "python"

# |slope| * D plus the intercept term must stay below 2**63
_INT64_SAFE = 2**60


def _fits(D: int, lam: int) -> bool:
    return _ext is not None and D * (lam + 1) < _INT64_SAFE


def plateau_orbit_points(D, s0, k0, s1, k1, A, B, C, budget):
    impl = _ext if _fits(D, abs(s0)) else _kernels_py
    return impl.plateau_orbit_points(D, s0, k0, s1, k1, A, B, C, budget)


def open_orbit_points(D, s0, k0, s1, k1, A, B, C, budget):
    impl = _ext if _fits(D, abs(s0)) else _kernels_py
    return impl.open_orbit_points(D, s0, k0, s1, k1, A, B, C, budget)


def cylinder_counts(D, s0, k0, s1, k1, A, B, n):
    impl = _ext if _fits(D, abs(s0)) else _kernels_py
    return impl.cylinder_counts(D, s0, k0, s1, k1, A, B, n)
