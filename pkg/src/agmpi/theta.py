"""Jacobi theta constants by truncated q-series.

For 0 <= q < 1,

    theta2(q) = 2 q^(1/4) (1 + q^2 + q^6 + q^12 + ...)   exponents n(n+1)
    theta3(q) = 1 + 2 (q + q^4 + q^9 + ...)              exponents n^2
    theta4(q) = 1 - 2q + 2q^4 - 2q^9 + ...

Each series is summed forward with incrementally built powers (one
multiplication per term) and truncated at the first term below working
precision.  The terms of theta2/theta3 are positive and decreasing, so
forward summation is stable; theta4's signed terms are added in pairs to
limit cancellation.

These constants parameterize the AGM exactly: starting the iteration from
a0 = 1, b0 = theta4(q)^2/theta3(q)^2 gives
a_n = theta3(q^(2^n))^2/theta3(q)^2, and correspondingly for b_n and the
differences c_n with theta4 and theta2.
"""
from __future__ import annotations

from dataclasses import dataclass

from .mpreal import DomainError, Real, div, fourth_root, reciprocal


@dataclass(frozen=True)
class ThetaValue:
    """A theta constant together with its series truncation point."""

    value: Real
    q: Real
    terms_used: int


def _check_q(q: Real, allow_zero: bool = True) -> None:
    if q.sign < 0 or (not allow_zero and q.is_zero):
        raise DomainError("q must lie in [0, 1)")
    if q >= Real.from_int(1, q.prec):
        raise DomainError("q must lie in [0, 1)")


def _sum_q_powers(q: Real, first_step: int, step_growth: int) -> tuple[Real, int]:
    """1 + sum of q^(e_n) where e_1 = first_step and e_{n+1} - e_n grows by
    `step_growth`; one multiplication per term."""
    wb = q.prec.working_bits
    one = Real.from_int(1, q.prec)
    if q.is_zero:
        return one, 0
    # build q^first_step and q^step_growth by repeated squaring
    inc = _pow_int(q, first_step)
    grow = _pow_int(q, step_growth)
    acc = one
    term = one
    used = 0
    while True:
        term = term * inc
        if term.is_zero or term.mag2() < -wb:
            break
        acc = acc + term
        inc = inc * grow
        used += 1
    return acc, used


def _pow_int(q: Real, n: int) -> Real:
    result = Real.from_int(1, q.prec)
    base = q
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base.square()
    return result


def theta2_ex(q: Real) -> ThetaValue:
    _check_q(q)
    if q.is_zero:
        return ThetaValue(Real.zero(q.prec), q, 0)
    tail, used = _sum_q_powers(q, 2, 2)  # exponents n(n+1): 2, 6, 12, ...
    value = (fourth_root(q) * tail).ldexp(1)
    return ThetaValue(value, q, used + 1)


def theta3_ex(q: Real) -> ThetaValue:
    _check_q(q)
    one = Real.from_int(1, q.prec)
    if q.is_zero:
        return ThetaValue(one, q, 0)
    tail, used = _sum_q_powers(q, 1, 2)  # exponents n^2: 1, 4, 9, ...
    return ThetaValue(one + (tail - one).ldexp(1), q, used)


def theta4_ex(q: Real) -> ThetaValue:
    _check_q(q)
    one = Real.from_int(1, q.prec)
    if q.is_zero:
        return ThetaValue(one, q, 0)
    wb = q.prec.working_bits
    # signed terms q^(n^2), summed in consecutive pairs
    acc = one
    term = one
    odd = q
    qsq = q.square()
    sign = -1
    used = 0
    pending = None
    while True:
        term = term * odd
        odd = odd * qsq
        if term.is_zero or term.mag2() < -wb:
            break
        signed = -term if sign < 0 else term
        if pending is None:
            pending = signed
        else:
            acc = acc + (pending + signed)
            pending = None
        sign = -sign
        used += 1
    if pending is not None:
        acc = acc + pending
    return ThetaValue(one + (acc - one).ldexp(1), q, used)


def theta2(q: Real) -> Real:
    return theta2_ex(q).value


def theta3(q: Real) -> Real:
    return theta3_ex(q).value


def theta4(q: Real) -> Real:
    return theta4_ex(q).value


def theta2_sq_q4(q: Real, truncated: bool = False) -> Real:
    """theta2(q^4)^2 built directly from q, avoiding any fractional power.

    theta2(q^4) = 2q (1 + q^8 + q^24 + ...); with ``truncated`` only the
    three leading terms 2(q + q^9 + q^25) are kept, valid once q^49 is
    below working precision.
    """
    _check_q(q, allow_zero=False)
    if truncated:
        q8 = _pow_int(q, 8)
        inner = Real.from_int(1, q.prec) + q8 + _pow_int(q8, 3)
    else:
        inner, _ = _sum_q_powers(q, 8, 8)  # exponents 4n(n+1): 8, 24, 48...
    return (q * inner).ldexp(1).square()


def theta3_sq_q4(q: Real, truncated: bool = False) -> Real:
    """theta3(q^4)^2 built directly from q; truncated keeps 1 + 2(q^4 + q^16)."""
    _check_q(q, allow_zero=False)
    one = Real.from_int(1, q.prec)
    if truncated:
        q4 = _pow_int(q, 4)
        tail = q4 + _pow_int(q4, 4)
    else:
        inner, _ = _sum_q_powers(_pow_int(q, 4), 1, 2)
        tail = inner - one
    return (one + tail.ldexp(1)).square()


def jacobi_residuals(q: Real) -> tuple[Real, Real]:
    """Residuals of Jacobi's addition formulae; zero in exact arithmetic.

    r1 = theta3(q)^2 - theta2(q^2)^2 - theta3(q^2)^2
    r2 = theta3(q)^4 - theta2(q)^4 - theta4(q)^4
    """
    _check_q(q)
    qsq = q.square()
    t3 = theta3(q)
    r1 = t3.square() - theta2(qsq).square() - theta3(qsq).square()
    r2 = t3.square().square() - theta2(q).square().square() - theta4(q).square().square()
    return r1, r2


def agm_theta_check(q: Real, n: int) -> Real:
    """Worst deviation between AGM iterates and their theta parameterization.

    Runs the AGM from a0 = 1, b0 = theta4(q)^2/theta3(q)^2 and compares
    a_m, b_m against theta3/theta4 of q^(2^m) (scaled), and c_m against
    theta2 of q^(2^m) for m >= 1, over all m <= n.
    """
    from .agm import agm

    _check_q(q, allow_zero=False)
    prec = q.prec
    t3_sq = theta3(q).square()
    scale = reciprocal(t3_sq)
    one = Real.from_int(1, prec)
    b0 = theta4(q).square() * scale
    _, trace = agm(one, b0)
    worst = Real.zero(prec)
    qpow = q
    last = min(n, trace.iterations)
    for m in range(last + 1):
        da = abs(trace.a[m] - theta3(qpow).square() * scale)
        db = abs(trace.b[m] - theta4(qpow).square() * scale)
        worst = max(worst, da, db)
        if m >= 1:
            dc = abs(trace.c[m - 1] - theta2(qpow).square() * scale)
            worst = max(worst, dc)
        qpow = qpow.square()
    return worst
