"""Library-wide numerical tolerance.

All approximate comparisons in the library use a single configurable
constant ``epsilon``, applied in absolute-plus-relative form
``epsilon * (1 + magnitude)``.  The default is 1e-10 and may be set at
process start through the ``QUATISOM_TOL`` environment variable, or at
runtime with :func:`set_tolerance`.
"""

from __future__ import annotations

import os

ENV_VAR = "QUATISOM_TOL"

_TOL_MIN = 0.0
_TOL_MAX = 1e-2
_DEFAULT = 1e-10


def _validate(value: float) -> float:
    value = float(value)
    if not (_TOL_MIN < value < _TOL_MAX):
        raise ValueError(f"tolerance must lie in ({_TOL_MIN}, {_TOL_MAX}), got {value}")
    return value


def _from_env() -> float:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return _DEFAULT
    return _validate(float(raw))


_tolerance = _from_env()


def get_tolerance() -> float:
    """Current library-wide epsilon."""
    return _tolerance


def set_tolerance(value: float) -> float:
    """Set the library-wide epsilon; returns the previous value."""
    global _tolerance
    old = _tolerance
    _tolerance = _validate(value)
    return old


def resolve(tol: float | None) -> float:
    """An explicit tolerance if given, else the library-wide one."""
    if tol is None:
        return _tolerance
    return _validate(tol)
