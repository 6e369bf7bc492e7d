"""Backend selection for the hot kernel-sum loops.

At import time the compiled extension ``binomix._fastkern`` is preferred;
if it is missing (source checkout without a build, unsupported platform)
the pure-NumPy implementation in ``binomix._purekern`` is used instead.
Set ``BINOMIX_BACKEND=python`` or ``BINOMIX_BACKEND=c`` to force one.

Both backends are deterministic.  They may differ from each other in the
last floating-point ulps (different summation orders); within a backend,
repeated calls are bit-identical.
"""

from __future__ import annotations

import os

from . import _purekern

_forced = os.environ.get("BINOMIX_BACKEND", "").lower()

try:
    from . import _fastkern
except ImportError:  # pragma: no cover - depends on build environment
    _fastkern = None

if _forced == "python":
    _impl = _purekern
elif _forced == "c":
    if _fastkern is None:
        raise ImportError(
            "BINOMIX_BACKEND=c requested but the compiled extension "
            "binomix._fastkern is not available"
        )
    _impl = _fastkern
else:
    _impl = _fastkern if _fastkern is not None else _purekern


def active_backend() -> str:
    """Name of the backend in use: 'c' (compiled) or 'python'."""
    return "c" if _impl is _fastkern and _fastkern is not None else "python"


def get_backend(name: str):
    """Return the backend module by name (for benchmarks and tests)."""
    if name == "python":
        return _purekern
    if name == "c":
        if _fastkern is None:
            raise ValueError("compiled backend not available")
        return _fastkern
    raise ValueError(f"unknown backend {name!r}")


def weighted_sums(c2, pts, w, us, h):
    return _impl.weighted_sums(c2, pts, w, us, h)


def kernel_values(c2, pts, u, h):
    return _impl.kernel_values(c2, pts, u, h)


def power_sums(pts, w, us, h, npow):
    return _impl.power_sums(pts, w, us, h, npow)
