"""Real AGM iteration with trace, complete elliptic integrals, and the nome.

The arithmetic-geometric mean of positive a0, b0 iterates

    a_{n+1} = (a_n + b_n)/2,    b_{n+1} = sqrt(a_n b_n)

until the pair agrees to working precision; both sequences converge
quadratically to a common limit.  With a0 = 1, b0 = sqrt(1 - k^2) the
limit equals pi / (2 K(k)), which gives the complete elliptic integral of
the first kind; the auxiliary differences c_{n+1} = a_n - a_{n+1} give
E(k) through the classical series, and the two integrals combine in
Legendre's relation

    E(k) K'(k) + E'(k) K(k) - K(k) K'(k) = pi/2,

whose computed residual is pure rounding noise.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import constants
from .mpreal import DomainError, Precision, Real, div, reciprocal, sqrt


@dataclass(frozen=True)
class AgmTrace:
    """Per-iteration record of an AGM run.

    ``a[n]`` and ``b[n]`` hold the n-th iterates (index 0 = the inputs).
    ``c[i]`` holds c_{i+1} = a_i - a_{i+1}; the index-0 difference c_0 is
    deliberately not defined.
    """

    a: tuple
    b: tuple
    c: tuple
    iterations: int


def agm(a0: Real, b0: Real) -> tuple[Real, AgmTrace]:
    """AGM limit of positive a0, b0, with the full iteration trace."""
    if a0.sign <= 0 or b0.sign <= 0:
        raise DomainError("agm requires positive starting values")
    wb = a0.prec.working_bits
    cap = 3 * max(1, wb.bit_length()) + 8
    a_seq = [a0]
    b_seq = [b0]
    c_seq = []
    a, b = a0, b0
    n = 0
    while True:
        gap = a - b
        if gap.is_zero or gap.mag2() <= a.mag2() - wb:
            break
        if n >= cap:
            raise DomainError("agm failed to converge within the iteration cap")
        a_next = (a + b).ldexp(-1)
        c_seq.append(a - a_next)
        b = sqrt(a * b)
        a = a_next
        a_seq.append(a)
        b_seq.append(b)
        n += 1
    return a, AgmTrace(tuple(a_seq), tuple(b_seq), tuple(c_seq), n)


def validate_trace(trace: AgmTrace, ulps: int = 8) -> float:
    """Check the Salamin identity 4 a_{n+1} c_{n+1} = c_n^2 on a trace.

    Returns the worst deviation seen, in ulps of c_n^2, raising if it
    exceeds ``ulps``.
    """
    from .mpreal import ulp_diff

    worst = 0.0
    for n in range(1, len(trace.c)):
        lhs = (trace.a[n + 1] * trace.c[n]).ldexp(2)
        rhs = trace.c[n - 1].square()
        worst = max(worst, ulp_diff(lhs, rhs))
    if worst > ulps:
        raise DomainError(f"Salamin identity violated by {worst} ulps")
    return worst


def _complementary(k: Real) -> Real:
    one = Real.from_int(1, k.prec)
    return sqrt(one - k.square())


def _check_modulus(k: Real) -> None:
    if k.sign <= 0 or k >= Real.from_int(1, k.prec):
        raise DomainError("modulus must lie strictly between 0 and 1")


def elliptic_k(k: Real) -> Real:
    """Complete elliptic integral K(k) = pi / (2 agm(1, k'))."""
    _check_modulus(k)
    prec = k.prec
    limit, _ = agm(Real.from_int(1, prec), _complementary(k))
    return constants.pi(prec) * reciprocal(limit).ldexp(-1)


def elliptic_e(k: Real) -> Real:
    """Complete elliptic integral E(k) from the same AGM run as K(k).

    Uses E/K = 1 - k^2/2 - sum_{n>=0} 2^n (a_n - a_{n+1})^2 over the
    iteration with a0 = 1, b0 = k'; the summand terms decay quadratically,
    so the trace already contains every term above working precision.
    """
    _check_modulus(k)
    prec = k.prec
    wb = prec.working_bits
    one = Real.from_int(1, prec)
    limit, trace = agm(one, _complementary(k))
    acc = one - k.square().ldexp(-1)
    for n, c in enumerate(trace.c):
        term = c.square().ldexp(n)
        if term.is_zero or term.mag2() < -wb:
            break
        acc = acc - term
    big_k = constants.pi(prec) * reciprocal(limit).ldexp(-1)
    return big_k * acc


def legendre_residual(k: Real) -> Real:
    """E K' + E' K - K K' - pi/2; exactly zero in exact arithmetic."""
    _check_modulus(k)
    prec = k.prec
    kp = _complementary(k)
    big_k, big_e = elliptic_k(k), elliptic_e(k)
    big_kp, big_ep = elliptic_k(kp), elliptic_e(kp)
    half_pi = constants.pi(prec).ldexp(-1)
    return big_e * big_kp + big_ep * big_k - big_k * big_kp - half_pi


def nome(k: Real) -> Real:
    """q = exp(-pi K'(k)/K(k)), the natural theta-series parameter."""
    _check_modulus(k)
    from .elemfn import exp

    prec = k.prec
    ratio = div(elliptic_k(_complementary(k)), elliptic_k(k))
    return exp(-(constants.pi(prec) * ratio))


def hyper_f_half(z: Real, terms: int) -> Real:
    """Truncated Gauss series F(1/2, 1/2; 1; z); oracle for elliptic_k.

    Term ratio is ((n + 1/2)/(n + 1))^2 z, so the coefficients are exact
    rationals and the sum is independent of any AGM machinery.
    """
    if abs(z) >= Real.from_int(1, z.prec):
        raise DomainError("series requires |z| < 1")
    one = Real.from_int(1, z.prec)
    term = one
    acc = one
    for n in range(terms - 1):
        term = term * z
        term = term.mul_int((2 * n + 1) ** 2).div_int(4 * (n + 1) ** 2)
        if term.is_zero:
            break
        acc = acc + term
    return acc
