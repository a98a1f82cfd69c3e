"""Binary words, iterated-integral symbols and their reduction to zeta generators.

A multiple zeta value uses the increasing-index convention

    zeta(n1, ..., nr) = sum_{0 < k1 < ... < kr} k1^-n1 ... kr^-nr,   nr >= 2,

and equals (-1)^r I(0; rho(n); 1), where rho(n1..nr) = 1 0^{n1-1} ... 1 0^{nr-1}.
An index is a plain tuple of positive ints; the empty tuple stands for the
unit 1 in weight 0.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import NamedTuple, Sequence

from .combinatorics import compositions, shuffle_words
from .errors import NotConvergent
from .exact_numbers import binomial
from .lincomb import LinComb, accumulate

ZetaIndex = tuple  # tuple[int, ...]
Word = tuple  # tuple[int, ...] of bits

UNIT: ZetaIndex = ()


def check_index(index: Sequence[int]) -> ZetaIndex:
    """Validate and return ``index`` as a tuple."""
    index = tuple(int(n) for n in index)
    if not index:
        raise NotConvergent("empty index")
    if any(n < 1 for n in index):
        raise NotConvergent(f"index entries must be positive: {index}")
    if index[-1] < 2:
        raise NotConvergent(f"last entry must be >= 2: {index}")
    return index


def weight(index: ZetaIndex) -> int:
    return sum(index)


def depth(index: ZetaIndex) -> int:
    return len(index)


def index_key(index: ZetaIndex):
    """Sort key: weight, then depth, then entries."""
    return (sum(index), len(index), index)


def format_index(index: ZetaIndex) -> str:
    if not index:
        return "1"
    return "zeta(" + ",".join(map(str, index)) + ")"


class ZetaComb(LinComb):
    """Linear combination of zeta generators, ordered by weight and depth."""

    __slots__ = ()

    @staticmethod
    def sort_key(key):
        return index_key(key)

    def __str__(self):
        return render_combination(self, format_index)


def render_combination(comb: LinComb, fmt) -> str:
    if not comb:
        return "0"
    parts = []
    for key, c in comb.items():
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        coef = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        parts.append((sign, f"{coef}*{fmt(key)}"))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def rho(index: Sequence[int]) -> Word:
    """The word 1 0^{n1-1} ... 1 0^{nr-1}."""
    out: list[int] = []
    for n in index:
        if n < 1:
            raise NotConvergent(f"index entries must be positive: {tuple(index)}")
        out.append(1)
        out.extend([0] * (n - 1))
    return tuple(out)


def blocks(word: Word) -> tuple[int, ...]:
    """Block lengths of a word starting with 1 (each block is 1 0^k)."""
    if not word or word[0] != 1:
        raise NotConvergent(f"word must start with 1: {word}")
    parts = []
    for a in word:
        if a == 1:
            parts.append(1)
        else:
            parts[-1] += 1
    return tuple(parts)


def is_convergent(word: Word) -> bool:
    return len(word) >= 2 and word[0] == 1 and word[-1] == 0


def word_to_index(word: Sequence[int]) -> ZetaIndex:
    word = tuple(word)
    if not is_convergent(word):
        raise NotConvergent(f"word must begin with 1 and end with 0: {word}")
    return blocks(word)


def dual(word: Sequence[int]) -> Word:
    """Reverse the word and swap 0 <-> 1."""
    return tuple(1 - a for a in reversed(tuple(word)))


def format_word(word: Word) -> str:
    return "".join(map(str, word))


class ISymbol(NamedTuple):
    """The symbol I(a0; a1 ... an; a_end) with bits a_i."""

    a0: int
    letters: Word
    a_end: int

    @property
    def weight(self) -> int:
        return len(self.letters)

    def __str__(self):
        return f"I({self.a0};{format_word(self.letters)};{self.a_end})"


def make_symbol(a0: int, letters: Sequence[int], a_end: int) -> ISymbol:
    bits = (a0, *letters, a_end)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"symbol entries must be bits: {bits}")
    return ISymbol(int(a0), tuple(int(b) for b in letters), int(a_end))


def zeta_symbol(index: Sequence[int]) -> ISymbol:
    """I(0; rho(index); 1); equals (-1)^depth zeta(index)."""
    return ISymbol(0, rho(index), 1)


def normalize(sym: ISymbol) -> ZetaComb:
    """Rewrite a symbol as a rational combination of zeta generators.

    Applies, in order: weight 0 gives 1; equal endpoints or a constant word
    give 0; I(1;w;0) = (-1)^n I(0;reverse w;1); leading zeros are removed by
    the binomial expansion over compositions; a trailing 1 is removed by the
    duality w -> dual(w); the remaining convergent word gives
    (-1)^r zeta(blocks).
    """
    a0, letters, a_end = sym
    letters = tuple(letters)
    n = len(letters)
    if n == 0:
        return ZetaComb._trusted({UNIT: Fraction(1)})
    if a0 == a_end or all(a == letters[0] for a in letters):
        return ZetaComb._trusted({})
    if a0 == 1:
        out = _reduce_01(tuple(reversed(letters)))
        return -out if n % 2 else out
    return _reduce_01(letters)


def normalize_word(word: Sequence[int]) -> ZetaComb:
    """normalize(I(0; word; 1))."""
    return normalize(ISymbol(0, tuple(word), 1))


@lru_cache(maxsize=None)
def _reduce_01(word: Word) -> ZetaComb:
    """I(0; word; 1) for a word that is not constant."""
    if word[0] == 0:
        k = next(i for i, a in enumerate(word) if a == 1)
        parts = blocks(word[k:])
        acc: dict = {}
        for comp in compositions(k, len(parts)):
            mult = prod(binomial(n + i - 1, i) for n, i in zip(parts, comp))
            shifted = rho(tuple(n + i for n, i in zip(parts, comp)))
            for key, c in _reduce_01(shifted).raw_items():
                accumulate(acc, key, mult * c)
        sign = -1 if k % 2 else 1
        return ZetaComb._trusted({key: Fraction(sign * c) for key, c in acc.items()})
    if word[-1] == 1:
        # t -> 1 - t followed by path reversal: I(0;w;1) = (-1)^n I(0;dual(w);1)
        out = _reduce_01(dual(word))
        return -out if len(word) % 2 else out
    index = blocks(word)
    return ZetaComb._trusted({index: Fraction((-1) ** len(index))})


def normalize_combination(symbols: LinComb) -> ZetaComb:
    """Normalize a combination of symbols."""
    acc: dict = {}
    for sym, c in symbols.raw_items():
        for key, d in normalize(sym).raw_items():
            accumulate(acc, key, c * d)
    return ZetaComb._trusted(acc)


def shuffle_integrals(left: Sequence[int], right: Sequence[int], x: int, y: int) -> LinComb:
    """I(x; left; y) * I(x; right; y) expanded as a combination of symbols."""
    terms = shuffle_words(tuple(left), tuple(right))
    return LinComb((ISymbol(x, w, y), m) for w, m in terms.items())
