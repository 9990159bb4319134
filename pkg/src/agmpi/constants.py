"""Cached fundamental constants, keyed by working precision and substrate.

pi is self-hosted: it comes from a tight Gauss-Legendre loop over the
package's own arithmetic, so bound evaluation and elementary functions
never depend on an external constant.  log 2 comes from the theta-function
logarithm of an exact power of two.  Caches behave as read-mostly
registries: concurrent lookups are safe, and a duplicated computation on a
miss yields an identical value.
"""
from __future__ import annotations

from . import backend
from .mpreal import Precision, Real, inv_sqrt, reciprocal

_pi_cache: dict = {}
_log2_cache: dict = {}
_exp_neg_pi_cache: dict = {}


def _key(prec: Precision):
    return (prec.working_bits, backend.name())


def pi(prec: Precision) -> Real:
    """pi at working precision, by the Gauss-Legendre lower iterate."""
    key = _key(prec)
    hit = _pi_cache.get(key)
    if hit is not None:
        return hit
    wb = prec.working_bits
    a = Real.from_int(1, prec)
    b = inv_sqrt(Real.from_int(2, prec))
    s = Real(backend.mk(1), -2, prec)
    n = 0
    while True:
        a_next = (a + b).ldexp(-1)
        c = a - a_next
        csq = c.square()
        # the s-increment 2**n c**2 has the same scale as the output error,
        # so stop once it drops below the working precision
        done = csq.is_zero or csq.mag2() + n <= -wb - 8
        if not done:
            b = _sqrt(a * b)
            s = s - csq.ldexp(n)
        a = a_next
        n += 1
        if done:
            break
        if n > 3 * wb.bit_length() + 8:
            raise RuntimeError("pi iteration failed to converge")
    value = a.square() * reciprocal(s)
    _pi_cache[key] = value
    return value


def _sqrt(x: Real) -> Real:
    return x * inv_sqrt(x)


def log2(prec: Precision) -> Real:
    """log 2 at working precision, via the theta logarithm of 2**m."""
    key = _key(prec)
    hit = _log2_cache.get(key)
    if hit is not None:
        return hit
    from .elemfn import _log_sk_core

    m = prec.bits // 36 + 2
    x = Real(backend.mk(1), m, prec)
    value = _log_sk_core(x).div_int(m)
    _log2_cache[key] = value
    return value


def exp_neg_pi(prec: Precision) -> Real:
    """The nome value e**(-pi) at working precision."""
    key = _key(prec)
    hit = _exp_neg_pi_cache.get(key)
    if hit is not None:
        return hit
    from .elemfn import exp

    value = exp(-pi(prec))
    _exp_neg_pi_cache[key] = value
    return value


def clear_caches() -> None:
    _pi_cache.clear()
    _log2_cache.clear()
    _exp_neg_pi_cache.clear()
