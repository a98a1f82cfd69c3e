"""The comodule U = Q<f3, f5, ...> (x) Q[f2].

A basis word is an ``FWord``: a tuple of odd letters (each >= 3) together
with a power of the central letter f2.  Even letters f_{2n} never appear as
letters; they are rewritten eagerly to b_n f2^n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

from .combinatorics import shuffle_words
from .exact_numbers import euler_b
from .lincomb import LinComb, accumulate, format_fraction


class FWord(NamedTuple):
    odd: tuple
    f2: int = 0

    @property
    def weight(self) -> int:
        return sum(self.odd) + 2 * self.f2

    @property
    def depth(self) -> int:
        return len(self.odd)

    def __str__(self):
        letters = [f"f{m}" for m in self.odd]
        if self.f2 == 1:
            letters.append("f2")
        elif self.f2 > 1:
            letters.append(f"f2^{self.f2}")
        return " ".join(letters) if letters else "1"


def fword(*odd: int, f2: int = 0) -> FWord:
    for m in odd:
        if m < 3 or m % 2 == 0:
            raise ValueError(f"odd letters must be odd and >= 3, got {m}")
    if f2 < 0:
        raise ValueError("f2 exponent must be nonnegative")
    return FWord(tuple(odd), f2)


EMPTY = FWord((), 0)


def word_sort_key(w: FWord):
    return (w.weight, w.depth, w.odd, w.f2)


class FPoly(LinComb):
    """Element of U: rational combination of FWords."""

    __slots__ = ()

    @staticmethod
    def sort_key(key):
        return word_sort_key(key)

    def weights(self) -> set[int]:
        return {w.weight for w in self._terms}

    def __str__(self):
        return render(self)


def one() -> FPoly:
    return FPoly._trusted({EMPTY: Fraction(1)})


def zero() -> FPoly:
    return FPoly._trusted({})


def letter(m: int) -> FPoly:
    """f_m; for even m this is b_{m/2} f2^{m/2}."""
    if m == 2:
        return FPoly._trusted({FWord((), 1): Fraction(1)})
    if m % 2 == 0 and m > 0:
        return FPoly._trusted({FWord((), m // 2): euler_b(m // 2)})
    return FPoly._trusted({fword(m): Fraction(1)})


def f2_power(k: int) -> FPoly:
    return FPoly._trusted({FWord((), k): Fraction(1)})


def shuffle_mul(a: FPoly, b: FPoly) -> FPoly:
    acc: dict = {}
    for wa, ca in a.raw_items():
        for wb, cb in b.raw_items():
            c = ca * cb
            k = wa.f2 + wb.f2
            for w, m in shuffle_words(wa.odd, wb.odd).items():
                accumulate(acc, FWord(w, k), c * m)
    return FPoly._trusted(acc)


def shuffle_power(a: FPoly, n: int) -> FPoly:
    out = one()
    for _ in range(n):
        out = shuffle_mul(out, a)
    return out


def prepend(m: int, p: FPoly) -> FPoly:
    """f_m . p (concatenation on the left), m odd."""
    return FPoly._trusted({FWord((m,) + w.odd, w.f2): c for w, c in p.raw_items()})


class FTensor(LinComb):
    """Combination of pairs (FWord, FWord), read as left (x) right."""

    __slots__ = ()

    @staticmethod
    def sort_key(key):
        return (word_sort_key(key[0]), word_sort_key(key[1]))


def deconcat(w: FWord) -> FTensor:
    """Deconcatenation: all f2 factors go to the right-hand side."""
    odd = w.odd
    terms = {}
    for k in range(len(odd) + 1):
        left = FWord(odd[:k], 0)
        right = FWord(odd[k:], w.f2)
        terms[(left, right)] = Fraction(1)
    return FTensor._trusted(terms)


def deconcat_poly(p: FPoly) -> FTensor:
    acc: dict = {}
    for w, c in p.raw_items():
        for pair, d in deconcat(w).raw_items():
            accumulate(acc, pair, c * d)
    return FTensor._trusted(acc)


def truncate(m: int, p: FPoly) -> FPoly:
    """The derivation d_m: keep words starting with f_m and drop that letter."""
    if m < 3 or m % 2 == 0:
        raise ValueError("truncation index must be odd and >= 3")
    acc = {}
    for w, c in p.raw_items():
        if w.odd and w.odd[0] == m:
            acc[FWord(w.odd[1:], w.f2)] = c
    return FPoly._trusted(acc)


def coeff_f_single(m: int, p: FPoly) -> Fraction:
    """Coefficient of the one-letter word f_m (for even m, of f_m = b f2^{m/2})."""
    if m % 2 == 0:
        return p.coefficient(FWord((), m // 2)) / euler_b(m // 2)
    return p.coefficient(FWord((m,), 0))


def coeff_f2_power(k: int, p: FPoly) -> Fraction:
    return p.coefficient(FWord((), k))


def reconstruct(parts: Mapping[int, FPoly], c, n: int) -> FPoly:
    """sum_m f_m . parts[m] + c f_n: invert the truncations up to the kernel f_n."""
    out = letter(n).scale(c) if n >= 2 else zero()
    for m, part in parts.items():
        if part:
            out = out + prepend(m, part)
    return out


def homogeneous_weight(p: FPoly) -> int | None:
    w = p.weights()
    if not w:
        return None
    if len(w) > 1:
        raise ValueError(f"element is not homogeneous: weights {sorted(w)}")
    return next(iter(w))


@lru_cache(maxsize=None)
def odd_words(total: int) -> tuple[tuple[int, ...], ...]:
    """All sequences of odd letters >= 3 with the given sum."""
    if total == 0:
        return ((),)
    out = []
    for m in range(3, total + 1, 2):
        for rest in odd_words(total - m):
            out.append((m,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def basis_words(n: int) -> tuple[FWord, ...]:
    """Basis of U in weight n, in the canonical order."""
    words = [FWord(odd, k) for k in range(n // 2 + 1) for odd in odd_words(n - 2 * k)]
    return tuple(sorted(words, key=word_sort_key))


def dims(n: int) -> list[int]:
    """d_0..d_n with d_0 = 1, d_1 = 0, d_2 = 1 and d_k = d_{k-2} + d_{k-3}."""
    d = [1, 0, 1]
    for k in range(3, n + 1):
        d.append(d[k - 2] + d[k - 3])
    return d[: n + 1]


def coordinates(p: FPoly, n: int) -> list[Fraction]:
    words = basis_words(n)
    pos = {w: i for i, w in enumerate(words)}
    vec = [Fraction(0)] * len(words)
    for w, c in p.raw_items():
        if w.weight != n:
            raise ValueError(f"term {w} has weight {w.weight}, expected {n}")
        vec[pos[w]] = c
    return vec


def from_coordinates(vec: Sequence[Fraction], n: int) -> FPoly:
    return FPoly(zip(basis_words(n), vec))


def render(p: FPoly) -> str:
    if not p:
        return "0"
    out = []
    for w, c in p.items():
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if w == EMPTY:
            body = format_fraction(a)
        elif a == 1:
            body = str(w)
        else:
            body = f"{format_fraction(a)}*{w}"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def to_json(p: FPoly) -> list[dict]:
    return [{"word": list(w.odd), "f2": w.f2, "coef": format_fraction(c)} for w, c in p.items()]


def from_json(items) -> FPoly:
    return FPoly((FWord(tuple(t["word"]), int(t.get("f2", 0))), Fraction(t["coef"])) for t in items)
