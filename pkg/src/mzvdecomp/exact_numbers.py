"""Exact rationals, Bernoulli numbers, real numbers with error bounds and rational reconstruction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import AmbiguousReconstruction

Rational = Fraction


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, B_0 = 1
    if m == 0:
        return (Fraction(1),)
    prev = _bernoulli_table(m - 1)
    s = sum(binomial(m + 1, j) * prev[j] for j in range(m))
    return prev + (-s / (m + 1),)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n for even n >= 2 (B_1 = -1/2 convention for odd n=1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n % 2 and n != 1:
        return Fraction(0)
    # build incrementally so the recursion depth stays small
    for m in range(0, n + 1, 64):
        _bernoulli_table(m)
    return _bernoulli_table(n)[n]


def euler_b(n: int) -> Fraction:
    """The rational b_n with zeta(2n) = b_n * zeta(2)^n."""
    if n < 1:
        raise ValueError("n must be positive")
    return (-1) ** (n + 1) * bernoulli(2 * n) / 2 * Fraction(24**n, math.factorial(2 * n))


def mpf_to_fraction(x) -> Fraction:
    """The exact binary rational held by an mpf."""
    if not isinstance(x, mpmath.mpf):
        x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError("non-finite value")
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def fraction_to_mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _ulp_bound(x, prec):
    # rounding error of one correctly rounded operation at ``prec`` bits
    return abs(x) * mpmath.ldexp(1, 1 - prec)


@dataclass(frozen=True)
class BigReal:
    """An mpf value with an absolute error bound and a working precision in bits.

    Arithmetic runs at the larger precision of the operands, propagates the
    bound by interval rules and adds one rounding error per operation.
    """

    value: mpmath.mpf
    error: mpmath.mpf
    prec: int = 0

    def __post_init__(self):
        if not self.prec:
            object.__setattr__(self, "prec", mpmath.mp.prec)

    @classmethod
    def exact(cls, q, prec: int | None = None) -> "BigReal":
        q = Fraction(q)
        prec = prec or mpmath.mp.prec
        with mpmath.mp.workprec(prec):
            v = fraction_to_mpf(q)
            return cls(v, mpmath.mpf(0) if mpf_to_fraction(v) == q else _ulp_bound(v, prec), prec)

    @classmethod
    def zero(cls, prec: int | None = None) -> "BigReal":
        return cls(mpmath.mpf(0), mpmath.mpf(0), prec or mpmath.mp.prec)

    def _lift(self, other) -> "BigReal":
        return other if isinstance(other, BigReal) else BigReal.exact(other, self.prec)

    def __add__(self, other):
        other = self._lift(other)
        prec = max(self.prec, other.prec)
        with mpmath.mp.workprec(prec):
            v = self.value + other.value
            return BigReal(v, self.error + other.error + _ulp_bound(v, prec), prec)

    __radd__ = __add__

    def __neg__(self):
        with mpmath.mp.workprec(self.prec):
            return BigReal(-self.value, self.error, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, BigReal):
            q = Fraction(other)
            if q.denominator == 1:
                with mpmath.mp.workprec(self.prec):
                    v = self.value * q.numerator
                    return BigReal(v, self.error * abs(q.numerator) + _ulp_bound(v, self.prec), self.prec)
        other = self._lift(other)
        prec = max(self.prec, other.prec)
        with mpmath.mp.workprec(prec):
            v = self.value * other.value
            err = (
                abs(self.value) * other.error
                + abs(other.value) * self.error
                + self.error * other.error
                + _ulp_bound(v, prec)
            )
            return BigReal(v, err, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        prec = max(self.prec, other.prec)
        with mpmath.mp.workprec(prec):
            lo = abs(other.value) - other.error
            if lo <= 0:
                raise ZeroDivisionError("divisor interval contains zero")
            v = self.value / other.value
            # |a/b - a'/b'| <= (ea + |a/b| eb) / (|b| - eb)
            err = (self.error + abs(v) * other.error) / lo + _ulp_bound(v, prec)
            return BigReal(v, err, prec)

    def __pow__(self, n: int):
        out = BigReal.exact(1, self.prec)
        for _ in range(n):
            out = out * self
        return out

    def __abs__(self):
        with mpmath.mp.workprec(self.prec):
            return BigReal(abs(self.value), self.error, self.prec)

    def contains(self, q) -> bool:
        return abs(mpf_to_fraction(self.value) - Fraction(q)) <= mpf_to_fraction(self.error)

    def overlaps(self, other: "BigReal") -> bool:
        """The two error intervals intersect."""
        gap = abs(mpf_to_fraction(self.value) - mpf_to_fraction(other.value))
        return gap <= mpf_to_fraction(self.error) + mpf_to_fraction(other.error)

    def __repr__(self):
        return f"BigReal({mpmath.nstr(self.value, 20)} +/- {mpmath.nstr(self.error, 3)})"


def _convergents(x: Fraction):
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def reconstruct_rational(x: BigReal, max_den: int) -> Fraction:
    """The unique p/q with q <= max_den inside the error interval of ``x``.

    Raises AmbiguousReconstruction when 2*max_den^2*error >= 1, when no
    convergent fits, or when the nearest other convergent is less than ten
    times farther away than the accepted one.
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    if not mpmath.isfinite(x.error):
        raise AmbiguousReconstruction("error bound is not finite")
    err = mpf_to_fraction(x.error)
    if 2 * max_den**2 * err >= 1:
        raise AmbiguousReconstruction(
            f"uniqueness condition fails: 2*{max_den}^2*{float(err):.3g} >= 1"
        )
    target = mpf_to_fraction(x.value)
    candidates = []
    for conv in _convergents(target):
        if conv.denominator > max_den:
            break
        candidates.append(conv)
    fitting = [c for c in candidates if abs(target - c) <= err]
    if not fitting:
        raise AmbiguousReconstruction("no convergent within the error bound")
    if len(fitting) > 1:
        raise AmbiguousReconstruction(f"several convergents fit: {fitting}")
    best = fitting[0]
    d_best = abs(target - best) + err
    others = [abs(target - c) for c in candidates if c != best]
    if others and min(others) < 10 * d_best:
        raise AmbiguousReconstruction("runner-up convergent too close")
    return best
