"""Integer substrate for mantissa arithmetic.

All numeric kernels in this package run on exact integer mantissas.  Two
interchangeable substrates are supported: GMP integers through gmpy2
(compiled, fast at large sizes) and plain Python ints (always available).
Both types share the operator surface the kernels use (``*``, ``+``,
``<<``, ``>>``, ``//``, ``bit_length``), so values from either substrate
interoperate freely; the selection only controls which type newly created
mantissas get and which radix-conversion routine runs.

The default is chosen once at import: gmpy2 if importable, plain ints
otherwise.  Set ``AGMPI_BACKEND=gmp`` or ``AGMPI_BACKEND=python`` to force
a choice, or use :func:`force` to switch temporarily (benchmarks do this
to compare the two).
"""
from __future__ import annotations

import contextlib
import os
import sys

# Python 3.11+ caps int->str conversions by default; the pure backend
# prints mantissas far beyond that cap.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

try:
    import gmpy2 as _gmpy2
except ImportError:  # pragma: no cover - exercised only on gmpy2-less installs
    _gmpy2 = None

_NAMES = ("gmp", "python") if _gmpy2 is not None else ("python",)


def _resolve_default() -> str:
    forced = os.environ.get("AGMPI_BACKEND")
    if forced:
        if forced not in ("gmp", "python"):
            raise ValueError(f"AGMPI_BACKEND must be 'gmp' or 'python', got {forced!r}")
        if forced == "gmp" and _gmpy2 is None:
            raise ImportError("AGMPI_BACKEND=gmp but gmpy2 is not installed")
        return forced
    return "gmp" if _gmpy2 is not None else "python"


_active = _resolve_default()


def available() -> tuple[str, ...]:
    """Names of usable substrates on this install."""
    return _NAMES


def name() -> str:
    """Name of the currently active substrate."""
    return _active


def mk(x: int):
    """Lift a Python int into the active substrate's integer type."""
    if _active == "gmp":
        return _gmpy2.mpz(x)
    return int(x)


def to_str(m) -> str:
    # str() on gmpy2.mpz dispatches to GMP's subquadratic conversion.
    return str(m)


@contextlib.contextmanager
def force(which: str):
    """Temporarily select a substrate (not thread-safe; for benchmarks/tests)."""
    global _active
    if which not in _NAMES:
        raise ValueError(f"backend {which!r} not available (have {_NAMES})")
    prev = _active
    _active = which
    try:
        yield
    finally:
        _active = prev
