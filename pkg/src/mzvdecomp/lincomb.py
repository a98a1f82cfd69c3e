"""Finite formal linear combinations with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return Fraction(value)


class LinComb(Mapping):
    """Immutable map key -> nonzero Fraction.

    Iteration follows ``sort_key`` (default: the natural order of keys), so
    every traversal is deterministic.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable[tuple[Hashable, Any]] | None = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, coef in items:
                c = to_fraction(coef)
                if c:
                    acc[key] = acc.get(key, 0) + c
        self._terms = {k: v for k, v in acc.items() if v}
        self._hash = None

    @classmethod
    def _trusted(cls, terms: dict):
        # skip validation for dicts built internally with nonzero Fractions
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def single(cls, key, coef=1):
        return cls({key: coef})

    @staticmethod
    def sort_key(key):
        return key

    def __getitem__(self, key):
        return self._terms[key]

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def __iter__(self) -> Iterator:
        return iter(sorted(self._terms, key=self.sort_key))

    def __len__(self):
        return len(self._terms)

    def items(self):
        return [(k, self._terms[k]) for k in self]

    def raw_items(self):
        """Unordered view of the terms, for hot loops."""
        return self._terms.items()

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if isinstance(other, Mapping):
            return self._terms == {k: v for k, v in other.items() if v}
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _combine(self, other, sign):
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + sign * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return type(self)._trusted(out)

    def __add__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)._trusted({k: -v for k, v in self._terms.items()})

    def scale(self, c) -> "LinComb":
        c = to_fraction(c)
        if not c:
            return type(self)._trusted({})
        return type(self)._trusted({k: c * v for k, v in self._terms.items()})

    def __mul__(self, c):
        if isinstance(c, LinComb):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def map_keys(self, fn: Callable[[Any], Hashable]) -> "LinComb":
        return LinComb((fn(k), v) for k, v in self._terms.items())

    def __repr__(self):
        body = ", ".join(f"{k!r}: {v}" for k, v in self.items())
        return f"{type(self).__name__}({{{body}}})"


def accumulate(acc: dict, key, coef) -> None:
    """In-place ``acc[key] += coef`` that drops zeros."""
    s = acc.get(key, 0) + coef
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
