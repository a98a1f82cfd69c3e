"""Goncharov's coaction on iterated-integral symbols and its infinitesimal pieces.

For r odd, D_r keeps the cuts where a consecutive block of r letters is
removed: the block becomes the left factor (a symbol with its neighbouring
letters as endpoints) and the remaining letters form the quotient.  The left
factor is read modulo products, which is harmless downstream: only the
coefficient of the single letter f_r is ever taken, and a shuffle product of
two elements of positive weight has no one-letter word.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable

from .errors import CapExceeded
from .lincomb import LinComb, accumulate, format_fraction
from .words import ISymbol, ZetaComb, format_index, index_key, normalize, zeta_symbol

FULL_COPRODUCT_CAP = 12


def _sequence(sym: ISymbol) -> tuple:
    return (sym.a0, *sym.letters, sym.a_end)


def d_r(r: int, sym: ISymbol) -> list[tuple[ISymbol, ISymbol]]:
    """Raw (subsequence, quotient) pairs of the weight-r cuts, ordered by cut position."""
    if r < 1:
        raise ValueError("r must be positive")
    a = _sequence(sym)
    n = len(sym.letters)
    out = []
    for p in range(0, n - r + 1):
        sub = ISymbol(a[p], a[p + 1 : p + r + 1], a[p + r + 1])
        quot = ISymbol(a[0], a[1 : p + 1] + a[p + r + 1 : n + 1], a[n + 1])
        out.append((sub, quot))
    return out


class ZetaTensor(LinComb):
    """Combination of pairs (left index, right index)."""

    __slots__ = ()

    @staticmethod
    def sort_key(key):
        return (index_key(key[0]), index_key(key[1]))

    def __str__(self):
        if not self:
            return "0"
        out = ""
        for i, ((left, right), c) in enumerate(self.items()):
            body = f"{format_fraction(abs(c))} * {format_index(left)} (x) {format_index(right)}"
            if i == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out


def infinitesimal(r: int, sym: ISymbol) -> ZetaTensor:
    """D_r of a symbol with both factors normalized to generators."""
    acc: dict = {}
    for sub, quot in d_r(r, sym):
        left = normalize(sub)
        if not left:
            continue
        right = normalize(quot)
        for li, lc in left.raw_items():
            for ri, rc in right.raw_items():
                accumulate(acc, (li, ri), lc * rc)
    return ZetaTensor._trusted(acc)


def infinitesimal_zeta(r: int, index) -> ZetaTensor:
    """D_r zeta(index) = (-1)^depth D_r I(0; rho(index); 1)."""
    t = infinitesimal(r, zeta_symbol(index))
    return -t if len(index) % 2 else t


def project(tensor: ZetaTensor, coefficient: Callable[[tuple], Fraction]) -> ZetaComb:
    """sum c(left) * right, with ``coefficient`` evaluated on left generators."""
    acc: dict = {}
    cache: dict = {}
    for (left, right), c in tensor.raw_items():
        if left not in cache:
            cache[left] = coefficient(left)
        if cache[left]:
            accumulate(acc, right, c * cache[left])
    return ZetaComb._trusted(acc)


# --- full coaction (verification only) ----------------------------------------


def _monomial(factors) -> tuple:
    return tuple(sorted((f for f in factors if f != ()), key=index_key))


def poly_mul(a: dict, b: dict) -> dict:
    """Product of commutative polynomials keyed by sorted tuples of indices."""
    out: dict = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            accumulate(out, _monomial(ka + kb), ca * cb)
    return out


def _is_killed(index) -> bool:
    # zeta(2n) = b_n zeta(2)^n and zeta(2) vanishes in A
    return len(index) == 1 and index[0] % 2 == 0


def reduce_A_side(t: LinComb) -> LinComb:
    """Drop every term containing an even single zeta (a multiple of zeta(2) in A).

    Accepts a combination of indices or of monomials (tuples of indices).
    """
    from .numeric import is_monomial_key

    kept = {}
    for key, c in t.raw_items():
        factors = key if is_monomial_key(key) else (key,)
        if not any(_is_killed(f) for f in factors):
            kept[key] = c
    return type(t)._trusted(kept)


class CoactionTensor(LinComb):
    """Combination of pairs (left monomial, right index)."""

    __slots__ = ()

    @staticmethod
    def sort_key(key):
        left, right = key
        return (sum(map(sum, left)), tuple(index_key(f) for f in left), index_key(right))


def full_coproduct(sym: ISymbol, cap: int = FULL_COPRODUCT_CAP) -> CoactionTensor:
    """The whole coaction of a symbol, left factors reduced in A.

    Enumerates all 2^n subsets of the letters, so it refuses words longer than ``cap``.
    """
    a = _sequence(sym)
    n = len(sym.letters)
    if n > cap:
        raise CapExceeded(f"full coproduct limited to weight {cap}, got {n}")
    acc: dict = {}
    for k in range(n + 1):
        for subset in combinations(range(1, n + 1), k):
            cuts = (0, *subset, n + 1)
            left = {(): Fraction(1)}
            for i, j in zip(cuts, cuts[1:]):
                piece = normalize(ISymbol(a[i], a[i + 1 : j], a[j]))
                if not piece:
                    left = {}
                    break
                left = poly_mul(left, {_monomial((g,)): c for g, c in piece.raw_items() if not _is_killed(g)})
                if not left:
                    break
            if not left:
                continue
            right = normalize(ISymbol(a[0], tuple(a[i] for i in subset), a[n + 1]))
            for lm, lc in left.items():
                for ri, rc in right.raw_items():
                    accumulate(acc, (lm, ri), lc * rc)
    return CoactionTensor._trusted(acc)


def full_coproduct_zeta(index, cap: int = FULL_COPRODUCT_CAP) -> CoactionTensor:
    t = full_coproduct(zeta_symbol(index), cap)
    return -t if len(index) % 2 else t


def graded_lie_part(t: CoactionTensor, r: int) -> ZetaTensor:
    """Left weight r, left factor a single generator: the piece that D_r models."""
    acc: dict = {}
    for (left, right), c in t.raw_items():
        if len(left) == 1 and sum(left[0]) == r:
            accumulate(acc, (left[0], right), c)
    return ZetaTensor._trusted(acc)
