"""Numerical evaluation of multiple zeta values with error bounds.

Main method (``holder``): split the integration path at 1/2,

    I(0; w; 1) = sum_j I(0; w_1..w_j; 1/2) * (-1)^(n-j) I(0; dual(w_{j+1}..w_n); 1/2),

and evaluate each factor as a multiple polylogarithm at 1/2,
I(0; rho(m); 1/2) = (-1)^r sum_{k1<..<kr} 2^-kr / prod k_i^m_i, whose terms
decay like 2^-k.  The sums are done in fixed-point integers with explicit
truncation and rounding bounds.

Oracle (``direct``): the nested series itself, summed exactly up to a cutoff
K, with the dropped tails replaced by an Euler-Maclaurin expansion in 1/K.
It is slower and only has an estimated error, which is why it serves
as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import NotConvergent, PrecisionUnreachable
from .exact_numbers import BigReal, bernoulli, euler_b
from .words import blocks, check_index, dual, rho

LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision for numerical evaluation and reconstruction.

    ``max_den=None`` means 10^(digits // 4) at every precision reached.
    """

    digits: int = 64
    guard: int = 20
    max_digits: int = 1024
    max_den: int | None = None
    method: str = "holder"

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError("digits must be >= 30")
        if self.guard < 10:
            raise ValueError("guard must be >= 10")
        if self.max_digits < self.digits:
            raise ValueError("max_digits must be >= digits")
        if self.method not in ("holder", "direct"):
            raise ValueError(f"unknown method {self.method!r}")

    def denominator_bound(self, digits: int | None = None) -> int:
        if self.max_den is not None:
            return self.max_den
        return 10 ** ((digits or self.digits) // 4)

    def with_digits(self, digits: int) -> "PrecisionPolicy":
        return replace(self, digits=digits, max_digits=max(self.max_digits, digits))


def _bits_for(digits: int) -> int:
    return math.ceil(digits * LOG2_10)


def _working_prec(policy: PrecisionPolicy) -> int:
    return _bits_for(policy.digits + policy.guard) + 16


# --- Hoelder splitting --------------------------------------------------------


def _terms_needed(r: int, bits: int) -> int:
    """K with sum_{k>K} 2^-k (1 + ln k)^(r-1) <= 2^-(bits+1).

    For K >= max(r, 8) the ratio of consecutive terms is below 0.71, so the
    tail is at most 4 * 2^-(K+1) * (1 + ln(K+1))^(r-1).
    """
    K = max(r, 8, bits)

    def log2_tail(k):
        return 2 - (k + 1) + (r - 1) * math.log2(1 + math.log(k + 1))

    while log2_tail(K) > -(bits + 1):
        K += 1
    return K


@lru_cache(maxsize=4096)
def _half_series(parts: tuple, bits: int) -> tuple[int, int]:
    """sum_{0<k1<..<kr} 2^-kr / prod k_i^{n_i} at scale 2^bits and its error in ulps."""
    r = len(parts)
    K = _terms_needed(r, bits)
    one = 1 << bits
    vals = [0] + [one // k ** parts[0] for k in range(1, K + 1)]
    for n in parts[1:]:
        acc = 0
        new = [0] * (K + 1)
        for k in range(1, K + 1):
            new[k] = acc // k**n
            acc += vals[k]
        vals = new
    total = sum(vals[k] >> k for k in range(1, K + 1))
    # each nesting level adds at most 1 ulp per term (see module docstring);
    # final shifts add K, the truncated tail adds 1.
    return total, r + K + 2


def _half_integral(word: tuple, bits: int) -> tuple[int, int]:
    """I(0; word; 1/2) for a word starting with 1 (or empty), scaled by 2^bits."""
    if not word:
        return 1 << bits, 0
    parts = blocks(word)
    val, err = _half_series(parts, bits)
    return (-val if len(parts) % 2 else val), err


def _holder_integral(word: tuple, bits: int) -> tuple[int, int]:
    """I(0; word; 1) for a convergent word, scaled by 2^bits, with error in ulps."""
    n = len(word)
    total = 0
    err = 0
    for j in range(n + 1):
        a, ea = _half_integral(word[:j], bits)
        b, eb = _half_integral(dual(word[j:]), bits)
        if (n - j) % 2:
            b = -b
        total += (a * b) >> bits
        err += ((abs(a) * eb + abs(b) * ea + ea * eb) >> bits) + 2
    return total, err


def _pi_power_value(index, prec_bits):
    n = index[0] // 2
    with mpmath.mp.workprec(prec_bits):
        return euler_b(n).numerator * (mpmath.pi**2 / 6) ** n / euler_b(n).denominator


def _eval_holder(index: tuple, digits: int, guard: int) -> BigReal:
    bits = _bits_for(digits + guard) + 8
    word = rho(index)
    total, err_ulps = _holder_integral(word, bits + 8)
    prec = bits + 32
    with mpmath.mp.workprec(prec):
        value = mpmath.ldexp(mpmath.mpf(total), -(bits + 8))
        if len(index) % 2:
            value = -value
        actual = mpmath.ldexp(mpmath.mpf(err_ulps + 1), -(bits + 8))
    return value, actual


# --- direct summation oracle ----------------------------------------------------


def _rising(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= m + i
    return out


@lru_cache(maxsize=None)
def _power_tail(m: int, order: int) -> tuple[tuple[int, Fraction], ...]:
    """Asymptotic series of sum_{l>L} l^-m as pairs (p, c) meaning c L^-p, p <= order."""
    out = [(m - 1, Fraction(1, m - 1)), (m, Fraction(-1, 2))]
    j = 1
    while m + 2 * j - 1 <= order:
        c = bernoulli(2 * j) / math.factorial(2 * j) * _rising(m, 2 * j - 1)
        out.append((m + 2 * j - 1, c))
        j += 1
    return tuple((p, c) for p, c in out if p <= order)


@lru_cache(maxsize=None)
def _tail_series(tail: tuple, order: int) -> dict[int, Fraction]:
    """sum_{L<l1<..<ls} prod l_i^-m_i as {p: c} for c L^-p."""
    if not tail:
        return {0: Fraction(1)}
    inner = _tail_series(tail[1:], order)
    out: dict[int, Fraction] = {}
    for b, c in inner.items():
        for p, e in _power_tail(tail[0] + b, order):
            out[p] = out.get(p, 0) + c * e
    return out


def _eval_direct(index: tuple, digits: int, guard: int):
    target = digits + guard
    K = 2 * target
    order = target + 10
    prec = _bits_for(target) + 32
    r = len(index)
    with mpmath.mp.workprec(prec):
        # heads[j] = sum_{k1<..<kj<=K} prod k_i^-n_i; prefix[k] sums the
        # previous level over indices < k
        heads = [mpmath.mpf(1)]
        prefix = [mpmath.mpf(1)] * (K + 1)
        for n in index:
            vals = [mpmath.mpf(0)] + [prefix[k] / mpmath.mpf(k) ** n for k in range(1, K + 1)]
            heads.append(mpmath.fsum(vals))
            running = mpmath.mpf(0)
            for k in range(1, K + 1):
                prefix[k] = running
                running += vals[k]
        total = mpmath.mpf(0)
        inv_k = mpmath.mpf(1) / K
        last = mpmath.mpf(0)
        for j in range(r + 1):
            series = _tail_series(index[j:], order)
            t = mpmath.mpf(0)
            for p, c in series.items():
                term = mpmath.mpf(c.numerator) / c.denominator * inv_k**p
                t += term
                if p >= order - 2:
                    last = max(last, abs(term) * abs(heads[j]))
            total += heads[j] * t
        estimate = 10 * last + mpmath.ldexp(abs(total), -(prec - 8))
    return total, estimate


# --- public API ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _eval_cached(index: tuple, digits: int, guard: int, method: str):
    if index[0] % 2 == 0 and len(index) == 1:
        prec = _bits_for(digits + guard) + 16
        return _pi_power_value(index, prec), mpmath.ldexp(1, -prec + 8)
    if method == "direct":
        return _eval_direct(index, digits, guard)
    return _eval_holder(index, digits, guard)


def eval_zeta(index, policy: PrecisionPolicy | None = None) -> BigReal:
    """zeta(index) with an error bound of at most 10^-digits.

    The value is computed with ``guard`` extra digits; the reported bound is
    the larger of the propagated bound and 10^-digits.
    """
    policy = policy or PrecisionPolicy()
    index = check_index(index)
    value, actual = _eval_cached(index, policy.digits, policy.guard, policy.method)
    with mpmath.mp.workprec(_working_prec(policy)):
        nominal = mpmath.mpf(10) ** (-policy.digits)
        if actual > nominal:
            raise PrecisionUnreachable(f"{index}: error {actual} exceeds 10^-{policy.digits}")
        return BigReal(+value, nominal, _working_prec(policy))


def eval_word(word, policy: PrecisionPolicy | None = None) -> BigReal:
    """I(0; word; 1) for a convergent word."""
    from .words import word_to_index

    index = word_to_index(word)
    v = eval_zeta(index, policy)
    return -v if len(index) % 2 else v


def eval_generator_combination(comb, policy: PrecisionPolicy | None = None) -> BigReal:
    """Evaluate a combination of generators or of monomials in generators.

    Keys may be indices (tuples of ints) or monomials (tuples of indices).
    """
    policy = policy or PrecisionPolicy()
    prec = _working_prec(policy)
    with mpmath.mp.workprec(prec):
        total = BigReal.zero(prec)
        cache: dict = {}

        def value(index):
            if index == ():
                return BigReal.exact(1, prec)
            if index not in cache:
                cache[index] = eval_zeta(index, policy)
            return cache[index]

        for key, c in comb.items():
            if is_monomial_key(key):
                term = BigReal.exact(1, prec)
                for factor in key:
                    term = term * value(factor)
            else:
                term = value(key)
            total = total + term * c
        return total


def is_monomial_key(key) -> bool:
    """True for a tuple of indices (a product), False for a single index."""
    return key == () or isinstance(key[0], tuple)
