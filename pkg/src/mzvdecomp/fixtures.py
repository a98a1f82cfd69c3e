"""Reference identities used by ``mzv selftest`` and by the test suite."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Callable

from . import falgebra as F
from .bases import default10, hoffman
from .coaction import infinitesimal_zeta
from .decomposer import build, hoffman_coefficient
from .numeric import PrecisionPolicy
from .words import ZetaComb

# expected decompositions in the default basis, keyed by label tuples
GOLDEN_DECOMPOSITIONS = {
    (2, 3): {("zeta(5)",): Q(-11, 2), ("zeta(2)", "zeta(3)"): Q(3)},
    (4, 3): {("zeta(7)",): Q(-18), ("zeta(2)", "zeta(5)"): Q(10), ("zeta(2)", "zeta(2)", "zeta(3)"): Q(2, 5)},
    (3, 4): {("zeta(7)",): Q(17), ("zeta(2)", "zeta(5)"): Q(-10)},
    (4, 3, 3): {
        ("zeta(2)",) * 5: Q(4336, 1925),
        ("zeta(2)", "zeta(2)", "zeta(3)", "zeta(3)"): Q(1, 5),
        ("zeta(2)", "zeta(3)", "zeta(5)"): Q(10),
        ("zeta(5)", "zeta(5)"): Q(-49, 2),
        ("zeta(2)", "zeta(3,5)"): Q(-4),
        ("zeta(3)", "zeta(7)"): Q(-18),
        ("zeta(3,7)",): Q(1),
    },
    (1, 2): {("zeta(3)",): Q(1)},
    (1, 3): {("zeta(2)", "zeta(2)"): Q(1, 10)},
    (5,): {("zeta(5)",): Q(1)},
}

BASIS_IMAGES = {
    "zeta(3,5)": F.FPoly({F.fword(5, 3): -5}),
    "zeta(3,7)": F.FPoly({F.fword(7, 3): -14, F.fword(5, 5): -6}),
}

# (r, index) -> expected normalized D_r as {(left, right): coefficient}
INFINITESIMAL_COACTIONS = {
    (3, (2, 3)): {((3,), (2,)): Q(3)},
    (5, (4, 3)): {((5,), (2,)): Q(10)},
}


@dataclass
class FixtureResult:
    name: str
    passed: bool
    detail: str = ""


def _check(name: str, fn: Callable[[], tuple[bool, str]]) -> FixtureResult:
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing fixture is a failing fixture
        return FixtureResult(name, False, f"{type(exc).__name__}: {exc}")
    return FixtureResult(name, ok, detail)


def run_fixtures(policy: PrecisionPolicy | None = None) -> list[FixtureResult]:
    policy = policy or PrecisionPolicy()
    table = build(default10(), 10, policy)
    results = []

    for index, expected in GOLDEN_DECOMPOSITIONS.items():
        def golden(index=index, expected=expected):
            got = table.decompose(ZetaComb({index: 1}))
            by_label = {tuple(sorted(k)): v for k, v in got.by_labels().items()}
            want = {tuple(sorted(k)): v for k, v in expected.items()}
            return by_label == want, str(got)

        name = "decompose zeta(" + ",".join(map(str, index)) + ")"
        results.append(_check(name, golden))

    for label, image in BASIS_IMAGES.items():
        results.append(
            _check(f"phi({label})", lambda l=label, im=image: (table.phi_basis[l] == im, F.render(table.phi_basis[l])))
        )

    results.append(_check("dims 1..10", lambda: (F.dims(10)[1:] == [0, 1, 1, 1, 2, 2, 3, 4, 5, 7], str(F.dims(10)))))

    for (r, index), expected in INFINITESIMAL_COACTIONS.items():
        results.append(
            _check(
                f"D{r} zeta{index}",
                lambda r=r, index=index, e=expected: (
                    dict(infinitesimal_zeta(r, index).items()) == e,
                    str(infinitesimal_zeta(r, index)),
                ),
            )
        )

    def d7_projected():
        t = infinitesimal_zeta(7, (4, 3, 3))
        acc = {}
        for (left, right), c in t.items():
            acc[right] = acc.get(right, 0) + c * table.coefficient(7, left)
        return acc == {(3,): -32}, str(acc)

    results.append(_check("D7 zeta(4,3,3) projected", d7_projected))

    def one_three_family():
        parts = [infinitesimal_zeta(r, (1, 3, 1, 3)) for r in (3, 5, 7)]
        return all(not p for p in parts), "all empty" if not any(parts) else "nonzero"

    results.append(_check("D_r zeta(1,3,1,3) vanish", one_three_family))

    def stuffle():
        rep = table.verify_identity(
            {((3,), (4,)): 1}, {((3, 4),): 1, ((4, 3),): 1, ((7,),): 1}
        )
        return rep.equal, str(rep)

    results.append(_check("zeta(3)zeta(4) = zeta(3,4)+zeta(4,3)+zeta(7)", stuffle))

    results.append(
        _check("hoffman_coefficient(1,0) = -11/2", lambda: (hoffman_coefficient(1, 0) == Q(-11, 2), ""))
    )

    def hoffman_five():
        h = build(hoffman(7), 7, policy, source=table)
        got = h.decompose(ZetaComb({(5,): 1})).by_labels()
        want = {("zeta(2,3)",): Q(4, 5), ("zeta(3,2)",): Q(6, 5)}
        return got == want, str(got)

    results.append(_check("zeta(5) in the Hoffman basis", hoffman_five))
    return results
