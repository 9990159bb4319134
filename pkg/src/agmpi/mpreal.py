"""Arbitrary-precision real and complex arithmetic on integer mantissas.

A :class:`Real` is a normalized binary float ``mant * 2**exp`` whose
mantissa carries exactly ``working_bits`` significant bits, where
``working_bits = bits + guard_bits`` for the value's :class:`Precision`.
Rounding is faithful (results are within one unit in the last place of the
exact value, truncated toward zero); the guard bits absorb that noise long
before anything is printed.

Reciprocals and inverse square roots are computed by self-correcting
Newton iterations that start from a hardware-precision seed and double the
working precision each step, so their cost is a small multiple of one
full-precision multiplication.  Division is multiplication by a Newton
reciprocal, a square root is ``a * inv_sqrt(a)``, and a fourth root is two
inverse square roots.

Values are immutable after construction and all operations are pure, so
concurrent use from multiple threads is safe.
"""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass

from . import backend

_LOG2_10 = math.log2(10)

_DEC_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")


class Error(Exception):
    """Base class for errors raised by this package."""


class DomainError(Error, ValueError):
    """An argument lies outside an operation's mathematical domain."""


class RangeError(Error, ValueError):
    """A result would exceed the supported magnitude range."""


class ParseError(Error, ValueError):
    """A decimal string does not match the accepted grammar."""


class PrecisionError(Error, ArithmeticError):
    """Working precision was exhausted (an iteration failed to settle)."""


class VerificationError(Error):
    """An internal cross-check exceeded its rounding tolerance."""


class OpStats:
    """Running operation counts, for benchmark reports.

    Counters are plain ints bumped without locking; treat them as
    diagnostics, not exact totals under concurrency.  ``sqrt`` also bumps
    ``inv_sqrt`` (that is how square roots are computed), and ``div`` also
    bumps ``reciprocal`` and ``mul``.
    """

    __slots__ = ("add", "mul", "div", "reciprocal", "sqrt", "inv_sqrt")

    def __init__(self):
        self.reset()

    def reset(self) -> None:
        self.add = self.mul = self.div = self.reciprocal = 0
        self.sqrt = self.inv_sqrt = 0

    def snapshot(self) -> dict:
        return {k: getattr(self, k) for k in self.__slots__}


stats = OpStats()


def _guard_bits_default(bits: int) -> int:
    env = os.environ.get("AGMPI_GUARD_BITS")
    if env is not None:
        value = int(env)
        if value < 64:
            raise ValueError("AGMPI_GUARD_BITS must be at least 64")
        return value
    return 64 + 4 * max(1, math.ceil(math.log2(bits)))


@dataclass(frozen=True)
class Precision:
    """Working-precision policy: requested digits, bits, and guard bits."""

    decimal_digits: int
    bits: int
    guard_bits: int

    def __post_init__(self):
        if self.decimal_digits < 1:
            raise ValueError("decimal_digits must be positive")
        if self.bits < math.ceil(self.decimal_digits * _LOG2_10):
            raise ValueError("bits too small for the requested decimal digits")
        if self.guard_bits < 64:
            raise ValueError("guard_bits must be at least 64")

    @property
    def working_bits(self) -> int:
        return self.bits + self.guard_bits

    @classmethod
    def from_digits(cls, digits: int, guard_bits: int | None = None) -> "Precision":
        bits = math.ceil(digits * _LOG2_10)
        if guard_bits is None:
            guard_bits = _guard_bits_default(bits)
        return cls(digits, bits, guard_bits)

    def widened(self, extra_bits: int) -> "Precision":
        """Same policy with ``extra_bits`` more working bits."""
        if extra_bits <= 0:
            return self
        return Precision(self.decimal_digits, self.bits, self.guard_bits + extra_bits)


def _rshift_trunc(m, s: int):
    # shift toward zero regardless of sign
    if m >= 0:
        return m >> s
    return -((-m) >> s)


class Real:
    """Signed arbitrary-precision real carrying its working precision."""

    __slots__ = ("mant", "exp", "prec")

    def __init__(self, mant, exp: int, prec: Precision):
        wb = prec.working_bits
        if mant:
            neg = mant < 0
            m = -mant if neg else mant
            s = m.bit_length() - wb
            if s > 0:
                m >>= s
                exp += s
            elif s < 0:
                m <<= -s
                exp += s
            self.mant = -m if neg else m
            self.exp = exp
        else:
            self.mant = backend.mk(0)
            self.exp = 0
        self.prec = prec

    # -- constructors -------------------------------------------------

    @classmethod
    def from_int(cls, n: int, prec: Precision) -> "Real":
        return cls(backend.mk(n), 0, prec)

    @classmethod
    def zero(cls, prec: Precision) -> "Real":
        return cls(backend.mk(0), 0, prec)

    # -- predicates and cheap accessors --------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.mant

    @property
    def sign(self) -> int:
        if not self.mant:
            return 0
        return -1 if self.mant < 0 else 1

    def mag2(self) -> int | None:
        """Exponent of the magnitude: value in [2**(m-1), 2**m). None if zero."""
        if not self.mant:
            return None
        return self.exp + self.prec.working_bits

    def ulp_exp(self) -> int:
        """Exponent of one unit in the last place (mantissa is full-width)."""
        if not self.mant:
            raise DomainError("zero has no ulp")
        return self.exp

    def to_float(self) -> float:
        """Nearest double, with overflow clamped to +-inf."""
        if not self.mant:
            return 0.0
        m = abs(self.mant)
        top = int(m >> (self.prec.working_bits - 53))
        try:
            f = math.ldexp(top, self.exp + self.prec.working_bits - 53)
        except OverflowError:
            f = math.inf
        return -f if self.mant < 0 else f

    def log2_float(self) -> float:
        """log2 of |value| as a double (exponent handled exactly)."""
        if not self.mant:
            raise DomainError("log2 of zero")
        wb = self.prec.working_bits
        top = int(abs(self.mant) >> (wb - 53))
        return math.log2(top) + (self.exp + wb - 53)

    def round_to(self, prec: Precision) -> "Real":
        """The same value re-rounded to another precision."""
        if prec.working_bits == self.prec.working_bits:
            return Real(self.mant, self.exp, prec)
        return Real(self.mant, self.exp, prec)

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Real):
            if other.prec.working_bits != self.prec.working_bits:
                raise ValueError("operands must share a working precision")
            return other
        if isinstance(other, int):
            return Real.from_int(other, self.prec)
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        stats.add += 1
        a = self
        if not a.mant:
            return b
        if not b.mant:
            return a
        if a.exp < b.exp:
            a, b = b, a
        d = a.exp - b.exp
        if d > a.prec.working_bits + 2:
            return a
        return Real((a.mant << d) + b.mant, b.exp, a.prec)

    __radd__ = __add__

    def __neg__(self):
        r = Real.__new__(Real)
        r.mant = -self.mant
        r.exp = self.exp
        r.prec = self.prec
        return r

    def __abs__(self):
        return -self if self.mant < 0 else self

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return self.__add__(-b)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return b.__add__(-self)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        stats.mul += 1
        if not self.mant or not b.mant:
            return Real.zero(self.prec)
        return Real(self.mant * b.mant, self.exp + b.exp, self.prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return div(self, b)

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return div(b, self)

    def square(self) -> "Real":
        stats.mul += 1
        if not self.mant:
            return self
        return Real(self.mant * self.mant, 2 * self.exp, self.prec)

    def ldexp(self, k: int) -> "Real":
        """Exact scaling by 2**k."""
        if not self.mant:
            return self
        r = Real.__new__(Real)
        r.mant = self.mant
        r.exp = self.exp + k
        r.prec = self.prec
        return r

    def mul_int(self, n: int) -> "Real":
        if not self.mant or n == 0:
            return Real.zero(self.prec)
        stats.mul += 1
        return Real(self.mant * n, self.exp, self.prec)

    def div_int(self, n: int) -> "Real":
        """Faithful division by a nonzero integer (exact shift for +-2**k)."""
        if n == 0:
            raise DomainError("division by zero")
        if not self.mant:
            return self
        neg = (n < 0) != (self.mant < 0)
        na = -n if n < 0 else n
        if na & (na - 1) == 0:
            r = self.ldexp(-(na.bit_length() - 1))
            return -r if n < 0 else r
        stats.div += 1
        s = na.bit_length() + 1
        q = (abs(self.mant) << s) // na
        return Real(-q if neg else q, self.exp - s, self.prec)

    # -- comparisons ----------------------------------------------------

    def _cmp(self, other) -> int:
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        sa, sb = self.sign, b.sign
        if sa != sb:
            return 1 if sa > sb else -1
        if sa == 0:
            return 0
        ma, mb = self.mag2(), b.mag2()
        if ma != mb:
            bigger = 1 if ma > mb else -1
            return bigger * sa
        if self.mant == b.mant:
            return 0
        return 1 if self.mant > b.mant else -1

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if not isinstance(other, (Real, int)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        return hash((int(self.mant), self.exp))

    def __repr__(self):
        if not self.mant:
            return "Real(0)"
        shown = min(12, self.prec.decimal_digits)
        return f"Real({to_decimal(self, shown)}, digits={self.prec.decimal_digits})"


# ---------------------------------------------------------------------------
# Newton kernels
# ---------------------------------------------------------------------------

def _precision_ladder(target: int, start: int = 48) -> list[int]:
    steps = [target]
    while steps[-1] > start:
        steps.append(steps[-1] // 2 + 1)
    steps.reverse()
    return steps


def _recip_kernel(M, p: int):
    """y ~ 2**(2p)/M for a p-bit positive M, by doubling-precision Newton."""
    steps = _precision_ladder(p)
    p0 = steps[0]
    y = (backend.mk(1) << (2 * p0)) // (M >> (p - p0))
    prev = p0
    for pk in steps[1:]:
        y <<= pk - prev
        Mk = M >> (p - pk)
        r = (1 << (2 * pk)) - Mk * y
        y += (y * r) >> (2 * pk)
        prev = pk
    return y


def _invsqrt_kernel(V, p: int):
    """y ~ 2**p / sqrt(V / 2**p) for V ~ v*2**p with v in [1, 4)."""
    steps = _precision_ladder(p)
    p0 = steps[0]
    vf = float(int(V >> (p - 53))) / (1 << 53)
    y = backend.mk(int((1 << p0) / math.sqrt(vf)))
    prev = p0
    for pk in steps[1:]:
        y <<= pk - prev
        Vk = V >> (p - pk)
        t = (Vk * ((y * y) >> pk)) >> pk
        y = (y * (3 * (backend.mk(1) << pk) - t)) >> (pk + 1)
        prev = pk
    return y


def reciprocal(a: Real) -> Real:
    """1/a by self-correcting Newton iteration with doubling precision."""
    if not a.mant:
        raise DomainError("reciprocal of zero")
    stats.reciprocal += 1
    wb = a.prec.working_bits
    p = wb + 4
    M = abs(a.mant) << 4
    y = _recip_kernel(M, p)
    if a.mant < 0:
        y = -y
    return Real(y, -a.exp - p - wb, a.prec)


def inv_sqrt(a: Real) -> Real:
    """1/sqrt(a) for a > 0, by doubling-precision Newton iteration."""
    if a.sign <= 0:
        raise DomainError("inv_sqrt requires a positive argument")
    stats.inv_sqrt += 1
    wb = a.prec.working_bits
    p = wb + 6
    L = a.exp + wb - 1       # floor(log2 a)
    t = L >> 1
    V = a.mant << (a.exp + p - 2 * t)
    y = _invsqrt_kernel(V, p)
    return Real(y, -p - t, a.prec)


def sqrt(a: Real) -> Real:
    """sqrt(a) for a >= 0, via the inverse-square-root Newton iteration."""
    if a.sign < 0:
        raise DomainError("sqrt of a negative value (use the complex channel)")
    if not a.mant:
        return a
    stats.sqrt += 1
    return a * inv_sqrt(a)


def fourth_root(a: Real) -> Real:
    """a**(1/4) for a > 0, as two inverse square roots."""
    if a.sign <= 0:
        raise DomainError("fourth_root requires a positive argument")
    return inv_sqrt(inv_sqrt(a))


def add(a: Real, b: Real) -> Real:
    return a + b


def sub(a: Real, b: Real) -> Real:
    return a - b


def mul(a: Real, b: Real) -> Real:
    return a * b


def div(a: Real, b: Real) -> Real:
    """a/b computed as a * reciprocal(b)."""
    if not b.mant:
        raise DomainError("division by zero")
    stats.div += 1
    if not a.mant:
        return a
    return a * reciprocal(b)


def sqrt_newton_steps(s: Real, x0: Real, count: int) -> list[Real]:
    """Iterates of the classic x -> (x + s/x)/2 square-root recurrence.

    Instrumentation helper: runs at fixed precision and records every
    iterate so convergence order can be measured externally.
    """
    if s.sign <= 0 or x0.sign <= 0:
        raise DomainError("sqrt iteration needs positive s and x0")
    xs = [x0]
    x = x0
    for _ in range(count):
        x = (x + div(s, x)).ldexp(-1)
        xs.append(x)
    return xs


def ulp_diff(a: Real, b: Real) -> float:
    """|a - b| measured in units in the last place of the larger operand."""
    if a.prec.working_bits != b.prec.working_bits:
        raise ValueError("operands must share a working precision")
    if not a.mant and not b.mant:
        return 0.0
    ref = b if (not a.mant or (b.mant and b.mag2() > a.mag2())) else a
    e = min(x.exp for x in (a, b) if x.mant)
    da = (a.mant << (a.exp - e)) if a.mant else 0
    db = (b.mant << (b.exp - e)) if b.mant else 0
    diff = abs(da - db)
    if not diff:
        return 0.0
    scale = ref.exp - e
    q, r = divmod(diff, 1 << scale) if scale > 0 else (diff, 0)
    if q > 1 << 52:
        return math.inf
    frac = math.ldexp(float(int(r)), -scale) if scale > 0 else 0.0
    return float(int(q)) + frac


# ---------------------------------------------------------------------------
# Decimal conversion
# ---------------------------------------------------------------------------

def _scaled_digits(a: Real, digits: int, rounding: str):
    """(N, d) with N = the first `digits` decimal digits of |a| and
    |a| in [10**d, 10**(d+1))."""
    m = abs(a.mant)
    l2 = a.exp + a.prec.working_bits  # magnitude exponent
    d = math.floor((l2 - 1) * math.log10(2))
    k = digits - d  # aim for digits+1 decimal digits
    N1 = _floor_scale(m, a.exp, k)
    ten_d = backend.mk(10) ** digits
    while N1 < ten_d:
        d -= 1
        k += 1
        N1 = _floor_scale(m, a.exp, k)
    while N1 >= ten_d * 10:
        d += 1
        N1 //= 10
    if rounding == "round":
        N = (N1 + 5) // 10
        if N >= ten_d:
            N //= 10
            d += 1
    elif rounding == "trunc":
        N = N1 // 10
    else:
        raise ValueError(f"unknown rounding mode {rounding!r}")
    return N, d


def _floor_scale(m, e: int, k: int):
    """floor(m * 2**e * 10**k) for positive m."""
    if k >= 0:
        n = m * backend.mk(5) ** k
        e2 = e + k
    else:
        p5 = backend.mk(5) ** (-k)
        shift = p5.bit_length() + 4
        n = (m << shift) // p5
        e2 = e + k - shift
    return n << e2 if e2 >= 0 else n >> -e2


def to_decimal(a: Real, digits: int, rounding: str = "round") -> str:
    """Decimal string with `digits` significant digits.

    Fixed-point notation for moderate magnitudes, `mEn` form otherwise.
    Accurate to within one unit in the last printed digit.
    """
    if digits < 1:
        raise ValueError("digits must be positive")
    if digits > a.prec.decimal_digits:
        raise ValueError("digits exceeds the value's decimal precision")
    if not a.mant:
        return "0"
    N, d = _scaled_digits(a, digits, rounding)
    s = str(N)
    sign = "-" if a.mant < 0 else ""
    if d < -(digits + 6) or d > digits + 30:
        mant_str = s[0] if digits == 1 else s[0] + "." + s[1:]
        return f"{sign}{mant_str}E{d}"
    if d >= 0:
        ip = s[: d + 1] if d + 1 <= digits else s + "0" * (d + 1 - digits)
        fp = s[d + 1:] if d + 1 < digits else ""
        return sign + ip + ("." + fp if fp else "")
    return sign + "0." + "0" * (-d - 1) + s


def format_sci(a: Real, sig: int) -> str:
    """Scientific form `m.mm...e<d>` with `sig` significant digits, rounded."""
    if not a.mant:
        return "0"
    N, d = _scaled_digits(a, sig, "round")
    s = str(N)
    sign = "-" if a.mant < 0 else ""
    mant_str = s[0] if sig == 1 else s[0] + "." + s[1:]
    return f"{sign}{mant_str}e{d}"


def format_fixed(a: Real, frac_digits: int) -> str:
    """Fixed form with exactly `frac_digits` fraction digits, rounded."""
    if not a.mant:
        return "0." + "0" * frac_digits if frac_digits else "0"
    m = abs(a.mant)
    scaled = _floor_scale(m, a.exp, frac_digits + 1)
    scaled = (scaled + 5) // 10
    s = str(scaled).rjust(frac_digits + 1, "0")
    ip, fp = s[:-frac_digits] or "0", s[-frac_digits:]
    sign = "-" if a.mant < 0 else ""
    return f"{sign}{ip}.{fp}" if frac_digits else sign + ip


def from_decimal(s: str, prec: Precision) -> Real:
    """Parse sign, integer part, '.', fraction digits; `dEn` also accepted."""
    text = s.strip()
    if not _DEC_RE.match(text):
        raise ParseError(f"malformed decimal string: {s!r}")
    body = text
    expo = 0
    for marker in ("e", "E"):
        if marker in body:
            body, _, etext = body.partition(marker)
            expo = int(etext)
            break
    neg = body.startswith("-")
    body = body.lstrip("+-")
    if "." in body:
        ip, _, fp = body.partition(".")
    else:
        ip, fp = body, ""
    digits = (ip + fp) or "0"
    D = int(digits)
    if D == 0:
        return Real.zero(prec)
    k = expo - len(fp)
    wb = prec.working_bits
    if k >= 0:
        mant = backend.mk(D) * backend.mk(5) ** k
        value = Real(mant, k, prec)
    else:
        p5 = backend.mk(5) ** (-k)
        shift = max(0, wb + 4 + p5.bit_length() - D.bit_length())
        q = (backend.mk(D) << shift) // p5
        value = Real(q, k - shift, prec)
    return -value if neg else value


# ---------------------------------------------------------------------------
# Complex values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Complex:
    """Pair of Reals sharing one precision, for the complex AGM channel."""

    re: Real
    im: Real

    def __post_init__(self):
        if self.re.prec.working_bits != self.im.prec.working_bits:
            raise ValueError("re and im must share a working precision")

    @property
    def prec(self) -> Precision:
        return self.re.prec

    @property
    def is_zero(self) -> bool:
        return self.re.is_zero and self.im.is_zero

    def __add__(self, other: "Complex") -> "Complex":
        return Complex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Complex") -> "Complex":
        return Complex(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "Complex") -> "Complex":
        a, b, c, d = self.re, self.im, other.re, other.im
        return Complex(a * c - b * d, a * d + b * c)

    def __neg__(self) -> "Complex":
        return Complex(-self.re, -self.im)

    def ldexp(self, k: int) -> "Complex":
        return Complex(self.re.ldexp(k), self.im.ldexp(k))

    def abs2(self) -> Real:
        return self.re.square() + self.im.square()


def complex_from_real(x: Real) -> Complex:
    return Complex(x, Real.zero(x.prec))


def cabs(z: Complex) -> Real:
    if z.im.is_zero:
        return abs(z.re)
    if z.re.is_zero:
        return abs(z.im)
    return sqrt(z.abs2())


def creciprocal(z: Complex) -> Complex:
    if z.is_zero:
        raise DomainError("reciprocal of complex zero")
    r = reciprocal(z.abs2())
    return Complex(z.re * r, -(z.im * r))


def cdiv(a: Complex, b: Complex) -> Complex:
    return a * creciprocal(b)


def csqrt(z: Complex) -> Complex:
    """Principal square root: Re >= 0, and Im >= 0 when Re = 0."""
    zero = Real.zero(z.prec)
    if z.im.is_zero:
        if z.re.sign >= 0:
            return Complex(sqrt(z.re), zero)
        return Complex(zero, sqrt(-z.re))
    w = cabs(z)
    if z.re.sign >= 0:
        u = sqrt((w + z.re).ldexp(-1))
        v = (z.im * reciprocal(u)).ldexp(-1)
        return Complex(u, v)
    v = sqrt((w - z.re).ldexp(-1))
    if z.im.sign < 0:
        v = -v
    u = (z.im * reciprocal(v)).ldexp(-1)
    return Complex(u, v)
