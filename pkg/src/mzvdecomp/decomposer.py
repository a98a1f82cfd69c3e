"""phi tables and decompositions of zeta values in a polynomial or linear basis.

The map phi into the f-alphabet is built weight by weight.

* Basis elements get phi(b) = u(b): the part forced by the coaction, with
  no f_N term (zeta(2) -> f2 and zeta(2n+1) -> f_{2n+1} by normalization).
* Any other generator xi of weight N gets phi(xi) = u(xi) + c f_N, where
  u(xi) = sum_r f_r . (coefficient of f_r in the left factor) phi(quotient) over
  the cuts of D_r, and the single unknown rational c is
  (period(xi) - period(rho^-1 u)) / period(rho^-1 f_N), reconstructed from a
  high-precision value by continued fractions.

rho_N sends monomials in the basis to their phi-images in weight N; a basis
is admissible when rho_N is square and invertible for every N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import mpmath

from . import falgebra as F
from .bases import Basis, BasisElement, default10
from .coaction import d_r
from .combinatorics import multisets_of_weight
from .errors import (
    AmbiguousReconstruction,
    CapExceeded,
    DimensionMismatch,
    InvalidBasis,
    NotABasis,
    SingularMatrix,
)
from .exact_numbers import BigReal, binomial, euler_b, reconstruct_rational
from .falgebra import FPoly
from .lincomb import LinComb, accumulate, format_fraction
from .linalg import inverse, mat_vec
from .numeric import PrecisionPolicy, _working_prec, eval_zeta, is_monomial_key
from .words import ZetaComb, format_index, index_key, normalize, zeta_symbol

VERIFY_EXTRA_DIGITS = 20


def hoffman_coefficient(a: int, b: int) -> Fraction:
    """Coefficient of f_{2n+1} in phi(zeta(2^a 3 2^b)), n = a + b + 1.

    2 (-1)^n [C(2n, 2a+2) - (1 - 2^-2n) C(2n, 2b+1)]; it only depends on the
    normalization of phi.
    """
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    n = a + b + 1
    bracket = binomial(2 * n, 2 * a + 2) - (1 - Fraction(1, 4**n)) * binomial(2 * n, 2 * b + 1)
    return 2 * (-1) ** n * bracket


def _two_three_shape(index) -> tuple[str, int, int] | None:
    if not set(index) <= {2, 3}:
        return None
    threes = [i for i, n in enumerate(index) if n == 3]
    if not threes:
        return ("twos", len(index), 0)
    if len(threes) == 1:
        a = threes[0]
        return ("one-three", a, len(index) - a - 1)
    return None


@dataclass
class Certificate:
    """Provenance of one recovered rational c for a generator."""

    generator: tuple
    reconstructed: Fraction
    method: str  # numeric | closed-form
    digits: int | None = None
    value: str | None = None
    max_den: int | None = None
    attempts: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "generator": list(self.generator),
            "method": self.method,
            "digits": self.digits,
            "value": self.value,
            "reconstructed": format_fraction(self.reconstructed),
            "max_den": None if self.max_den is None else str(self.max_den),
            "attempts": self.attempts,
        }


@dataclass
class RhoMatrix:
    """rho_N: columns are phi-images of basis monomials in U_N coordinates."""

    weight: int
    monomials: list[tuple[int, ...]]
    columns: list[list[Fraction]]
    inverse: list[list[Fraction]]

    def solve(self, p: FPoly) -> dict[tuple[int, ...], Fraction]:
        coords = F.coordinates(p, self.weight) if self.weight else [p.coefficient(F.EMPTY)]
        x = mat_vec(self.inverse, coords)
        return {m: c for m, c in zip(self.monomials, x) if c}


def _rho_matrix(weight: int, monomials, images: list[FPoly]) -> RhoMatrix:
    expected = F.dims(weight)[weight]
    if len(monomials) != expected:
        raise DimensionMismatch(weight, len(monomials), expected)
    columns = [F.coordinates(img, weight) for img in images]
    rows = [[columns[j][i] for j in range(expected)] for i in range(expected)]
    try:
        inv = inverse(rows)
    except SingularMatrix as exc:
        raise NotABasis(weight, exc.rank, exc.size) from None
    return RhoMatrix(weight, list(monomials), columns, inv)


class Poly(LinComb):
    """Polynomial in generators: keys are sorted tuples of indices (monomials)."""

    __slots__ = ()

    @staticmethod
    def sort_key(key):
        return (sum(map(sum, key)), tuple(index_key(f) for f in key))

    @classmethod
    def from_comb(cls, comb: Mapping) -> "Poly":
        out = {}
        for k, c in comb.items():
            mono = k if is_monomial_key(k) else ((k,) if k else ())
            accumulate(out, tuple(sorted(mono, key=index_key)), Fraction(c))
        return cls._trusted(out)

    def __str__(self):
        if not self:
            return "0"
        parts = [(c, _monomial_string(mono)) for mono, c in self.items()]
        return _render_terms(parts)

    def weights(self) -> set[int]:
        return {sum(map(sum, k)) for k in self._terms}


def _monomial_string(mono) -> str:
    if not mono:
        return "1"
    pieces = []
    for f in dict.fromkeys(mono):
        e = mono.count(f)
        pieces.append(format_index(f) + (f"^{e}" if e > 1 else ""))
    return " * ".join(pieces)


def _render_terms(parts: list[tuple[Fraction, str]]) -> str:
    out = ""
    for i, (c, body) in enumerate(parts):
        a = abs(c)
        text = format_fraction(a) if body == "1" else f"{format_fraction(a)} * {body}"
        if i == 0:
            out += ("-" if c < 0 else "") + text
        else:
            out += (" - " if c < 0 else " + ") + text
    return out


@dataclass
class Decomposition:
    """A ξ written as a polynomial in basis elements."""

    weight: int
    basis_name: str
    labels: list[str]
    monomial_coefficients: dict[tuple[int, ...], Fraction]
    certificates: list[Certificate]
    basis_weights: list[int] = field(default_factory=list)

    def coefficient(self, *labels: str) -> Fraction:
        pos = {l: i for i, l in enumerate(self.labels)}
        key = tuple(sorted(pos[l] for l in labels))
        return self.monomial_coefficients.get(key, Fraction(0))

    def by_labels(self) -> dict[tuple[str, ...], Fraction]:
        return {tuple(self.labels[i] for i in m): c for m, c in self.monomial_coefficients.items()}

    def _factor_string(self, mono) -> str:
        if not mono:
            return "1"
        counts: dict[int, int] = {}
        for i in mono:
            counts[i] = counts.get(i, 0) + 1
        pieces = []
        for i in sorted(counts):
            e = counts[i]
            pieces.append(self.labels[i] if e == 1 else f"{self.labels[i]}^{e}")
        return " * ".join(pieces)

    def __str__(self):
        if not self.monomial_coefficients:
            return "0"
        return _render_terms(
            [(self.monomial_coefficients[m], self._factor_string(m)) for m in sorted(self.monomial_coefficients)]
        )

    def to_json(self) -> dict:
        monos = []
        for m in sorted(self.monomial_coefficients):
            factors: dict[str, int] = {}
            for i in m:
                factors[self.labels[i]] = factors.get(self.labels[i], 0) + 1
            monos.append(
                {
                    "factors": [{"element": k, "power": v} for k, v in factors.items()],
                    "coef": format_fraction(self.monomial_coefficients[m]),
                }
            )
        return {
            "weight": self.weight,
            "basis": self.basis_name,
            "text": str(self),
            "monomials": monos,
            "certificates": [c.to_json() for c in self.certificates],
        }


@dataclass
class IdentityReport:
    equal: bool
    phi_difference: FPoly
    certificates: list[Certificate]

    def __str__(self):
        verdict = "equal" if self.equal else "not equal"
        if self.equal:
            return verdict
        return f"{verdict}: phi(lhs - rhs) = {F.render(self.phi_difference)}"


class PhiTable:
    """phi on a polynomial (algebra) basis, filled lazily above the built weights.

    ``hoffman_shortcuts`` uses closed forms for zeta(2,...,2) and for
    zeta(2^a 3 2^b) instead of numerics.
    """

    def __init__(
        self,
        basis: Basis,
        max_weight: int,
        policy: PrecisionPolicy | None = None,
        hoffman_shortcuts: bool = True,
    ):
        if basis.kind != "algebra":
            raise InvalidBasis("PhiTable needs a polynomial basis; use LinearBasisTable for linear ones")
        if basis.max_weight > max_weight:
            basis = basis.restricted(max_weight)
        if not basis.contains_b0(max_weight):
            raise InvalidBasis(f"basis must contain zeta(2) and all zeta(2r+1) up to weight {max_weight}")
        self.basis = basis
        self.max_weight = max_weight
        self.policy = policy or PrecisionPolicy()
        self.hoffman_shortcuts = hoffman_shortcuts
        self.labels = [e.label for e in basis.elements]
        self.phi_basis: dict[str, FPoly] = {}
        self.phi_cache: dict[tuple, FPoly] = {(): F.one()}
        self.deps: dict[tuple, frozenset] = {(): frozenset()}
        self.certificates: dict[tuple, Certificate] = {}
        self.rho_matrices: dict[int, RhoMatrix] = {}
        self._kernel: dict[int, dict] = {}
        self._coef_cache: dict[tuple, Fraction] = {}
        self._basis_deps: dict[str, frozenset] = {}
        self._singles = {e.single_index(): e for e in basis.elements if e.single_index()}

    # -- construction ---------------------------------------------------------

    def build(self) -> "PhiTable":
        for n in range(2, self.max_weight + 1):
            for e in self.basis.of_weight(n):
                img, deps = self._basis_image(e)
                self.phi_basis[e.label] = img
                self._basis_deps[e.label] = deps
            self._build_rho(n)
        return self

    def _basis_image(self, e: BasisElement) -> tuple[FPoly, frozenset]:
        index = e.single_index()
        if index is not None and len(index) == 1 and (index[0] == 2 or index[0] % 2):
            return F.letter(index[0]), frozenset()
        out = F.zero()
        deps: set = set()
        for gen, c in e.combination.items():
            if len(gen) == 1:
                continue  # single zetas have no coaction part
            u, d = self._forced_part(gen)
            out = out + u.scale(c)
            deps |= d
        if index is not None:
            self.phi_cache[index] = out
            self.deps[index] = frozenset(deps)
        return out, frozenset(deps)

    def _monomial_image(self, mono: tuple[int, ...]) -> FPoly:
        out = F.one()
        for i in mono:
            out = F.shuffle_mul(out, self.phi_basis[self.labels[i]])
        return out

    def _build_rho(self, n: int) -> None:
        weights = [e.weight for e in self.basis.elements]
        monos = multisets_of_weight(weights, n)
        images = [self._monomial_image(m) for m in monos]
        rho = _rho_matrix(n, monos, images)
        self.rho_matrices[n] = rho
        self._kernel[n] = rho.solve(F.letter(n))

    def _rho(self, n: int) -> RhoMatrix:
        if n > self.max_weight:
            raise CapExceeded(f"weight {n} above table cap {self.max_weight}")
        if n not in self.rho_matrices:
            raise RuntimeError("table not built; call build() first")
        return self.rho_matrices[n]

    # -- phi -------------------------------------------------------------------

    def coefficient(self, r: int, gen: tuple) -> Fraction:
        """Coefficient of f_r in phi(gen), gen of weight r."""
        if len(gen) == 1:
            return Fraction(1) if gen[0] == r else Fraction(0)
        key = (r, gen)
        if key not in self._coef_cache:
            self._coef_cache[key] = F.coeff_f_single(r, self.phi_generator(gen))
        return self._coef_cache[key]

    def _forced_part(self, index: tuple) -> tuple[FPoly, frozenset]:
        """u(zeta(index)): the f_r-leading words forced by the coaction."""
        n = sum(index)
        acc: dict = {}
        deps: set = set()
        sym = zeta_symbol(index)
        for r in range(3, n, 2):
            for sub, quot in d_r(r, sym):
                left = normalize(sub)
                if not left:
                    continue
                c = Fraction(0)
                for gen, lc in left.raw_items():
                    cr = self.coefficient(r, gen)
                    if cr:
                        c += lc * cr
                        deps |= self.deps.get(gen, frozenset())
                if not c:
                    continue
                for gen, qc in normalize(quot).raw_items():
                    img = self.phi_generator(gen)
                    deps |= self.deps[gen]
                    for w, wc in img.raw_items():
                        accumulate(acc, F.FWord((r,) + w.odd, w.f2), c * qc * wc)
        u = FPoly._trusted(acc)
        if len(index) % 2:
            u = -u
        return u, frozenset(deps)

    def phi_generator(self, index: tuple) -> FPoly:
        """phi(zeta(index)); memoized."""
        cached = self.phi_cache.get(index)
        if cached is not None:
            return cached
        n = sum(index)
        if n > self.max_weight:
            raise CapExceeded(f"weight {n} above table cap {self.max_weight}")
        if len(index) == 1:
            img, deps = F.letter(n), frozenset()
        elif index in self._singles:
            img, deps = self._basis_image(self._singles[index])
        else:
            img, deps = self._step_two(index)
        self.phi_cache[index] = img
        self.deps[index] = deps
        return img

    def _step_two(self, index: tuple) -> tuple[FPoly, frozenset]:
        n = sum(index)
        shape = _two_three_shape(index) if self.hoffman_shortcuts else None
        if shape and shape[0] == "twos":
            k = shape[1]
            img = F.f2_power(k).scale(Fraction(6**k, math.factorial(2 * k + 1)))
            self._record_closed_form(index, img.coefficient(F.FWord((), k)) / euler_b(k))
            return img, frozenset()
        u, deps = self._forced_part(index)
        if shape and shape[0] == "one-three":
            c = hoffman_coefficient(shape[1], shape[2])
            self._record_closed_form(index, c)
            return u + F.letter(n).scale(c), deps
        c, cert = self._recover_constant(index, u)
        self.certificates[index] = cert
        return u + F.letter(n).scale(c), deps | {index}

    def _record_closed_form(self, index, c):
        self.certificates.setdefault(index, Certificate(index, c, "closed-form"))

    # -- numerics ----------------------------------------------------------------

    def _period_monomials(self, coords: dict, policy: PrecisionPolicy) -> BigReal:
        prec = _working_prec(policy)
        total = BigReal.zero(prec)
        for mono, c in coords.items():
            term = BigReal.exact(1, prec)
            for i in mono:
                term = term * self._period_element(self.basis.elements[i], policy)
            total = total + term * c
        return total

    def _period_element(self, e: BasisElement, policy: PrecisionPolicy) -> BigReal:
        total = BigReal.zero(_working_prec(policy))
        for gen, c in e.combination.items():
            total = total + eval_zeta(gen, policy) * c
        return total

    def _constant_value(self, index, forced_coords, n, policy) -> BigReal:
        with mpmath.mp.workprec(_working_prec(policy)):
            value = eval_zeta(index, policy) - self._period_monomials(forced_coords, policy)
            return value / self._period_monomials(self._kernel[n], policy)

    def _recover_constant(self, index: tuple, u: FPoly) -> tuple[Fraction, Certificate]:
        """Reconstruct c = (per(xi) - per(rho^-1 u)) / per(rho^-1 f_N), escalating precision."""
        n = sum(index)
        coords = self._rho(n).solve(u)
        policy = self.policy
        digits = policy.digits
        attempts = []
        while True:
            at = policy.with_digits(digits)
            max_den = policy.denominator_bound(digits)
            x = self._constant_value(index, coords, n, at)
            try:
                q = reconstruct_rational(x, max_den)
            except AmbiguousReconstruction as exc:
                attempts.append({"digits": digits, "max_den": str(max_den), "outcome": f"ambiguous: {exc}"})
            else:
                check = self._constant_value(index, coords, n, at.with_digits(digits + VERIFY_EXTRA_DIGITS))
                if check.contains(q):
                    attempts.append({"digits": digits, "max_den": str(max_den), "outcome": "accepted"})
                    cert = Certificate(
                        index, q, "numeric", digits, mpmath.nstr(x.value, min(digits, 40)), max_den, attempts
                    )
                    return q, cert
                attempts.append({"digits": digits, "max_den": str(max_den), "outcome": "re-verification failed"})
            if digits >= policy.max_digits:
                raise AmbiguousReconstruction(
                    f"could not reconstruct c for {format_index(index)} within {policy.max_digits} digits",
                    attempts,
                )
            digits = min(2 * digits, policy.max_digits)

    # -- public helpers ----------------------------------------------------------

    def phi(self, xi) -> FPoly:
        """phi of a combination of generators or a polynomial in generators."""
        poly = xi if isinstance(xi, Poly) else Poly.from_comb(xi)
        out = F.zero()
        for mono, c in poly.items():
            img = F.one()
            for gen in mono:
                img = F.shuffle_mul(img, self.phi_generator(gen))
            out = out + img.scale(c)
        return out

    def dependencies(self, xi) -> frozenset:
        poly = xi if isinstance(xi, Poly) else Poly.from_comb(xi)
        out: set = set()
        for mono in poly:
            for gen in mono:
                self.phi_generator(gen)
                out |= self.deps[gen]
        return frozenset(out)

    def forced_part(self, index) -> FPoly:
        return self._forced_part(tuple(index))[0]

    def decompose(self, xi) -> Decomposition:
        poly = xi if isinstance(xi, Poly) else Poly.from_comb(xi)
        weights = poly.weights()
        if len(weights) > 1:
            raise ValueError(f"input is not homogeneous: weights {sorted(weights)}")
        n = weights.pop() if weights else 0
        image = self.phi(poly)
        if n == 0:
            coords = {(): image.coefficient(F.EMPTY)} if image else {}
        else:
            coords = self._rho(n).solve(image)
        deps = set(self.dependencies(poly))
        for mono in coords:
            for i in mono:
                deps |= self._basis_deps[self.labels[i]]
        certs = [self.certificates[g] for g in sorted(deps, key=index_key) if g in self.certificates]
        return Decomposition(n, self.basis.name, self.labels, coords, certs)

    def verify_identity(self, lhs, rhs) -> IdentityReport:
        left = lhs if isinstance(lhs, Poly) else Poly.from_comb(lhs)
        right = rhs if isinstance(rhs, Poly) else Poly.from_comb(rhs)
        diff = left - right
        if not diff:
            return IdentityReport(True, F.zero(), [])
        image = self.phi(diff)
        deps = self.dependencies(diff)
        certs = [self.certificates[g] for g in sorted(deps, key=index_key) if g in self.certificates]
        return IdentityReport(not image, image, certs)


class LinearBasisTable:
    """Decomposition into a vector-space basis such as the Hoffman elements.

    phi itself comes from a polynomial-basis table (``source``); only the
    rho matrices are formed from this basis.
    """

    def __init__(self, basis: Basis, max_weight: int, source: PhiTable):
        if basis.kind != "linear":
            raise InvalidBasis("LinearBasisTable needs a linear basis")
        if max_weight > source.max_weight:
            raise CapExceeded(
                f"linear basis up to weight {max_weight} needs a polynomial table of the same weight"
            )
        self.basis = basis.restricted(max_weight)
        self.max_weight = max_weight
        self.source = source
        self.labels = [e.label for e in self.basis.elements]
        self.phi_basis: dict[str, FPoly] = {}
        self.rho_matrices: dict[int, RhoMatrix] = {}

    @property
    def policy(self):
        return self.source.policy

    @policy.setter
    def policy(self, value):
        self.source.policy = value

    @property
    def certificates(self):
        return self.source.certificates

    def build(self) -> "LinearBasisTable":
        for n in range(2, self.max_weight + 1):
            positions = [i for i, e in enumerate(self.basis.elements) if e.weight == n]
            images = []
            for i in positions:
                e = self.basis.elements[i]
                img = self.source.phi(e.combination)
                self.phi_basis[e.label] = img
                images.append(img)
            self.rho_matrices[n] = _rho_matrix(n, [(i,) for i in positions], images)
        return self

    def phi(self, xi) -> FPoly:
        return self.source.phi(xi)

    def phi_generator(self, index) -> FPoly:
        return self.source.phi_generator(tuple(index))

    def decompose(self, xi) -> Decomposition:
        poly = xi if isinstance(xi, Poly) else Poly.from_comb(xi)
        weights = poly.weights()
        if len(weights) > 1:
            raise ValueError(f"input is not homogeneous: weights {sorted(weights)}")
        n = weights.pop() if weights else 0
        image = self.phi(poly)
        if n == 0:
            coords = {(): image.coefficient(F.EMPTY)} if image else {}
        else:
            if n > self.max_weight:
                raise CapExceeded(f"weight {n} above table cap {self.max_weight}")
            coords = self.rho_matrices[n].solve(image)
        deps = set(self.source.dependencies(poly))
        for mono in coords:
            for i in mono:
                deps |= self.source.dependencies(self.basis.elements[i].combination)
        certs = [self.certificates[g] for g in sorted(deps, key=index_key) if g in self.certificates]
        return Decomposition(n, self.basis.name, self.labels, coords, certs)

    def verify_identity(self, lhs, rhs) -> IdentityReport:
        return self.source.verify_identity(lhs, rhs)


def build(basis: Basis, max_weight: int | None = None, policy: PrecisionPolicy | None = None, **kwargs):
    """Build a table for ``basis`` up to ``max_weight``.

    A linear basis uses ``source`` (a built PhiTable) or else the default
    polynomial basis, which reaches weight 10.
    """
    if max_weight is None:
        max_weight = basis.max_weight
    if basis.kind == "linear":
        source = kwargs.pop("source", None)
        if source is None:
            if max_weight > 10:
                raise CapExceeded("a linear basis above weight 10 needs an explicit polynomial source table")
            source = PhiTable(default10(), max_weight, policy, **kwargs).build()
        return LinearBasisTable(basis, max_weight, source).build()
    return PhiTable(basis, max_weight, policy, **kwargs).build()


def _with_policy(t, policy):
    if policy is not None:
        t.policy = policy


def phi(t, xi, policy: PrecisionPolicy | None = None) -> FPoly:
    _with_policy(t, policy)
    return t.phi(xi)


def decompose(t, xi, policy: PrecisionPolicy | None = None) -> Decomposition:
    _with_policy(t, policy)
    return t.decompose(xi)


def verify_identity(t, lhs, rhs, policy: PrecisionPolicy | None = None) -> IdentityReport:
    _with_policy(t, policy)
    return t.verify_identity(lhs, rhs)
