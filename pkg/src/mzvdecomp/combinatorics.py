"""Small combinatorial generators shared by the word and f-letter algebras."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence


@lru_cache(maxsize=None)
def shuffle_words(u: tuple, v: tuple) -> dict[tuple, int]:
    """All interleavings of ``u`` and ``v`` with multiplicities.

    The multiplicities sum to C(len(u)+len(v), len(u)).
    """
    if not u:
        return {v: 1}
    if not v:
        return {u: 1}
    out: dict[tuple, int] = {}
    for w, m in shuffle_words(u[1:], v).items():
        key = (u[0],) + w
        out[key] = out.get(key, 0) + m
    for w, m in shuffle_words(u, v[1:]).items():
        key = (v[0],) + w
        out[key] = out.get(key, 0) + m
    return out


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` nonnegative integers, lexicographically."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multisets_of_weight(weights: Sequence[int], total: int) -> list[tuple[int, ...]]:
    """Sorted index tuples (with repetition) into ``weights`` whose weights sum to ``total``."""
    out: list[tuple[int, ...]] = []

    def rec(start, remaining, chosen):
        if remaining == 0:
            out.append(tuple(chosen))
            return
        for i in range(start, len(weights)):
            w = weights[i]
            if 0 < w <= remaining:
                chosen.append(i)
                rec(i, remaining - w, chosen)
                chosen.pop()

    rec(0, total, [])
    return out
