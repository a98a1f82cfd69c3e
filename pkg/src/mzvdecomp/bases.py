"""Basis descriptions: named built-ins and the JSON file format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InvalidBasis
from .lincomb import format_fraction
from .words import ZetaComb, check_index, format_index, render_combination


@dataclass(frozen=True)
class BasisElement:
    label: str
    combination: ZetaComb
    weight: int

    @classmethod
    def from_index(cls, index) -> "BasisElement":
        index = check_index(index)
        return cls(format_index(index), ZetaComb({index: 1}), sum(index))

    @classmethod
    def from_combination(cls, comb: ZetaComb, label: str | None = None) -> "BasisElement":
        weights = {sum(k) for k in comb}
        if len(weights) != 1:
            raise InvalidBasis(f"basis element must be nonzero and homogeneous: {comb}")
        for k in comb:
            check_index(k)
        w = weights.pop()
        if label is None:
            label = render_combination(comb, format_index)
            if len(comb) > 1:
                label = f"[{label}]"
        return cls(label, comb, w)

    def single_index(self):
        """The index when the element is exactly one generator with coefficient 1."""
        if len(self.combination) == 1:
            (index, c), = self.combination.items()
            if c == 1:
                return index
        return None


@dataclass
class Basis:
    """An ordered list of basis elements.

    ``kind`` is ``algebra`` (polynomial generators, products allowed) or
    ``linear`` (a vector-space basis of each weight).
    """

    name: str
    elements: list[BasisElement]
    kind: str = "algebra"

    def __post_init__(self):
        if self.kind not in ("algebra", "linear"):
            raise InvalidBasis(f"unknown basis kind {self.kind!r}")
        self.elements = sorted(self.elements, key=lambda e: e.weight)
        labels = [e.label for e in self.elements]
        if len(set(labels)) != len(labels):
            raise InvalidBasis("duplicate basis labels")

    @property
    def max_weight(self) -> int:
        return max((e.weight for e in self.elements), default=0)

    def of_weight(self, n: int) -> list[BasisElement]:
        return [e for e in self.elements if e.weight == n]

    def contains_b0(self, n: int) -> bool:
        """zeta(2) and every zeta(2r+1) <= n are elements."""
        singles = {e.single_index() for e in self.elements}
        need = [(2,)] + [(m,) for m in range(3, n + 1, 2)]
        return all(k in singles for k in need)

    def restricted(self, n: int) -> "Basis":
        return Basis(self.name, [e for e in self.elements if e.weight <= n], self.kind)

    def to_json(self) -> list[dict]:
        out = []
        for w in sorted({e.weight for e in self.elements}):
            elems = []
            for e in self.of_weight(w):
                terms = [{"index": list(k), "coef": format_fraction(c)} for k, c in e.combination.items()]
                elems.append({"label": e.label, "terms": terms})
            out.append({"weight": w, "elements": elems})
        return out


DEFAULT10_INDICES = [(2,), (3,), (5,), (7,), (3, 5), (9,), (3, 7)]


def default10() -> Basis:
    """The polynomial basis zeta(2), zeta(3), zeta(5), zeta(7), zeta(3,5), zeta(9), zeta(3,7)."""
    return Basis("default10", [BasisElement.from_index(k) for k in DEFAULT10_INDICES])


def two_three_compositions(n: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    out = []
    for first in (2, 3):
        if first <= n:
            out.extend((first,) + rest for rest in two_three_compositions(n - first))
    return sorted(out)


def hoffman(max_weight: int) -> Basis:
    """All zeta(n1..nr) with every n_i in {2, 3}, weights 2..max_weight, as a linear basis."""
    elements = [
        BasisElement.from_index(k) for n in range(2, max_weight + 1) for k in two_three_compositions(n)
    ]
    return Basis(f"hoffman{max_weight}", elements, kind="linear")


def basis_from_json(data, name: str = "custom") -> Basis:
    """Parse ``[{weight, elements: [{terms: [{index, coef}], label?}]}]``.

    An object ``{"name", "kind", "weights": [...]}`` is accepted too.
    """
    kind = "algebra"
    if isinstance(data, dict):
        name = data.get("name", name)
        kind = data.get("kind", kind)
        data = data.get("weights")
    if not isinstance(data, list):
        raise InvalidBasis("basis file must hold a JSON array of weight blocks")
    elements = []
    try:
        for block in data:
            w = int(block["weight"])
            for el in block["elements"]:
                comb = ZetaComb((tuple(t["index"]), Fraction(str(t.get("coef", "1")))) for t in el["terms"])
                e = BasisElement.from_combination(comb, el.get("label"))
                if e.weight != w:
                    raise InvalidBasis(f"element {e.label} has weight {e.weight}, block says {w}")
                elements.append(e)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidBasis):
            raise
        raise InvalidBasis(f"malformed basis file: {exc}") from exc
    return Basis(name, elements, kind)


def load_basis(name_or_path: str | Path) -> Basis:
    """A named basis (``default10``, ``hoffman`` or ``hoffmanN``) or a JSON file path."""
    text = str(name_or_path)
    if text == "default10":
        return default10()
    if text == "hoffman":
        return hoffman(10)
    if text.startswith("hoffman") and text[7:].isdigit():
        return hoffman(int(text[7:]))
    path = Path(text)
    if not path.exists():
        raise InvalidBasis(f"unknown basis {text!r}")
    return basis_from_json(json.loads(path.read_text()), name=path.stem)


def elements_from_indices(indices: Iterable[Sequence[int]]) -> list[BasisElement]:
    return [BasisElement.from_index(k) for k in indices]
