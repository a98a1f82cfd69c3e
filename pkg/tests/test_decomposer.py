import json
import math
import random
from fractions import Fraction

import mpmath
import pytest

from mzvdecomp import falgebra as F
from mzvdecomp.bases import Basis, BasisElement, basis_from_json, default10, hoffman, two_three_compositions
from mzvdecomp.coaction import infinitesimal_zeta, project
from mzvdecomp.decomposer import PhiTable, Poly, build, hoffman_coefficient
from mzvdecomp.errors import AmbiguousReconstruction, DimensionMismatch, InvalidBasis, NotABasis
from mzvdecomp.exact_numbers import euler_b
from mzvdecomp.fixtures import BASIS_IMAGES, GOLDEN_DECOMPOSITIONS
from mzvdecomp.numeric import PrecisionPolicy, eval_generator_combination, eval_zeta
from mzvdecomp.parsing import parse_expression
from mzvdecomp.words import ZetaComb, dual, normalize_combination, normalize_word, shuffle_integrals, word_to_index

from conftest import convergent_words, random_convergent_word

Q = Fraction
P40 = PrecisionPolicy(digits=40)


def stuffle(a, b):
    """Quasi-shuffle of two indices as {index: multiplicity}; an independent oracle."""
    if not a:
        return {b: 1}
    if not b:
        return {a: 1}
    out: dict = {}
    for rest, head in ((stuffle(a[1:], b), a[0]), (stuffle(a, b[1:]), b[0]), (stuffle(a[1:], b[1:]), a[0] + b[0])):
        for k, c in rest.items():
            key = (head,) + k
            out[key] = out.get(key, 0) + c
    return out


def numerically_zero(poly, policy=P40):
    return eval_generator_combination(poly, policy).contains(0)


@pytest.mark.parametrize("index", sorted(GOLDEN_DECOMPOSITIONS))
def test_golden_decompositions(table, index):
    d = table.decompose(ZetaComb({index: 1}))
    assert d.by_labels() == GOLDEN_DECOMPOSITIONS[index]


@pytest.mark.parametrize("label", sorted(BASIS_IMAGES))
def test_basis_images(table, label):
    assert table.phi_basis[label] == BASIS_IMAGES[label]


def test_phi_of_small_generators(table):
    assert table.phi_generator((2, 3)) == F.FPoly({F.fword(3, f2=1): 3, F.fword(5): Q(-11, 2)})
    assert table.phi_generator((3,)) == F.letter(3)
    # phi(zeta(4,3)) = -18 f7 + 10 f5 f2 + 2/5 f3 f2^2
    want = F.FPoly({F.fword(7): -18, F.fword(5, f2=1): 10, F.fword(3, f2=2): Q(2, 5)})
    assert table.phi_generator((4, 3)) == want


def test_zeta_4_3_3_full_text(table):
    d = table.decompose(parse_expression("zeta(4,3,3)"))
    assert str(d).startswith("4336/1925 * zeta(2)^5")
    assert d.coefficient("zeta(3,7)") == 1
    # 271/10 zeta(10) expressed through zeta(2)^5
    assert Q(271, 10) * euler_b(5) == Q(4336, 1925)
    assert numerically_zero(residual((4, 3, 3), d))


def _index(label):
    return tuple(int(x) for x in label[5:-1].split(","))


def residual(index, d):
    """zeta(index) minus its decomposition, as a polynomial in generators."""
    recon = {tuple(sorted(_index(d.labels[i]) for i in m)): c for m, c in d.monomial_coefficients.items()}
    return Poly({(index,): 1}) - Poly(recon)


def test_random_decompositions_match_numerics(table):
    rng = random.Random(3)
    indices = set()
    while len(indices) < 25:
        indices.add(word_to_index(random_convergent_word(rng, 10, 4)))
    for index in sorted(indices):
        d = table.decompose(ZetaComb({index: 1}))
        assert numerically_zero(residual(index, d)), index


def test_stuffle_products_respected(table):
    rng = random.Random(17)
    for _ in range(15):
        a = word_to_index(random_convergent_word(rng, 5))
        b = word_to_index(random_convergent_word(rng, 5))
        rep = table.verify_identity(Poly({(a, b) if a <= b else (b, a): 1}), ZetaComb(stuffle(a, b)))
        assert rep.equal, (a, b, str(rep))


def test_shuffle_products_respected(table):
    rng = random.Random(10)
    for _ in range(10):
        u = random_convergent_word(rng, 5)
        v = random_convergent_word(rng, 5)
        lhs = table.phi(normalize_combination(shuffle_integrals(u, v, 0, 1)))
        rhs = F.shuffle_mul(table.phi(normalize_word(u)), table.phi(normalize_word(v)))
        assert lhs == rhs, (u, v)


def test_intertwines_infinitesimal_coaction(table):
    for w in convergent_words(9, 4):
        g = word_to_index(w)
        n = sum(g)
        image = table.phi_generator(g)
        for r in range(3, n - 1, 2):
            projected = project(infinitesimal_zeta(r, g), lambda left: table.coefficient(r, left))
            assert F.truncate(r, image) == table.phi(projected), (g, r)


def test_duality_of_phi_images(table):
    for w in convergent_words(10):
        assert table.phi(normalize_word(w)) == table.phi(normalize_word(dual(w))).scale((-1) ** len(w)), w


@pytest.mark.parametrize("n", [1, 2])
def test_one_three_family_is_pure_zeta2_power(table, n):
    d = table.decompose(ZetaComb({(1, 3) * n: 1}))
    assert list(d.by_labels()) == [("zeta(2)",) * (2 * n)]


def test_zeta_1_3_is_a_tenth_of_zeta2_squared(table):
    assert table.decompose(parse_expression("zeta(1,3)")).by_labels() == {("zeta(2)", "zeta(2)"): Q(1, 10)}


def _d(*ms):
    """Compose truncations, rightmost applied first."""

    def op(p):
        for m in reversed(ms):
            p = F.truncate(m, p)
        return p

    return op


def _c2(k, p):
    return F.coeff_f2_power(k, p)


def _coef(p):
    return p.coefficient(F.EMPTY)


def test_weight_ten_extraction_operators(table):
    p = table.phi_generator((4, 3, 3))
    bracket_7_3 = _coef(_d(7, 3)(p)) - _coef(_d(3, 7)(p))
    a1 = Q(1, 2) * _c2(2, _d(3, 3)(p))
    a2 = _c2(1, _d(5, 3)(p))
    a3 = Q(1, 2) * _coef(_d(5, 5)(p)) + Q(3, 14) * bracket_7_3
    a4 = Q(1, 5) * (_c2(1, _d(5, 3)(p)) - _c2(1, _d(3, 5)(p)))
    a5 = _coef(_d(7, 3)(p))
    a6 = Q(1, 14) * bracket_7_3
    assert (a1, a2, a3, a4, a5, a6) == (Q(1, 5), 10, Q(-49, 2), -4, -18, 1)
    d = table.decompose(ZetaComb({(4, 3, 3): 1}))
    assert a1 == d.coefficient("zeta(2)", "zeta(2)", "zeta(3)", "zeta(3)")
    assert a2 == d.coefficient("zeta(2)", "zeta(3)", "zeta(5)")
    assert a3 == d.coefficient("zeta(5)", "zeta(5)")
    assert a4 == d.coefficient("zeta(2)", "zeta(3,5)")
    assert a5 == d.coefficient("zeta(3)", "zeta(7)")
    assert a6 == d.coefficient("zeta(3,7)")


def test_printed_extraction_operators_disagree(table):
    # the printed 6/14 and [d3,d5] ordering do not recover the decomposition
    p = table.phi_generator((4, 3, 3))
    bracket_7_3 = _coef(_d(7, 3)(p)) - _coef(_d(3, 7)(p))
    assert Q(1, 2) * _coef(_d(5, 5)(p)) + Q(6, 14) * bracket_7_3 != Q(-49, 2)
    assert Q(1, 5) * (_c2(1, _d(3, 5)(p)) - _c2(1, _d(5, 3)(p))) == 4


# --- Hoffman basis -------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_hoffman_powers_of_two(table, n):
    img = table.phi_generator((2,) * n)
    # zeta(2,...,2) = pi^{2n}/(2n+1)! = (6 zeta(2))^n/(2n+1)!
    assert img == F.f2_power(n).scale(Q(6**n, math.factorial(2 * n + 1)))
    with mpmath.workdps(60):
        v = eval_zeta((2,) * n, P40)
        assert abs(v.value - mpmath.pi ** (2 * n) / mpmath.factorial(2 * n + 1)) < mpmath.mpf(10) ** -40


def test_hoffman_coefficient_values():
    assert hoffman_coefficient(0, 0) == 1
    assert hoffman_coefficient(1, 0) == Q(-11, 2)
    assert hoffman_coefficient(0, 1) == Q(9, 2)


def test_hoffman_shortcuts_agree_with_numerics(table):
    plain = PhiTable(default10(), 10, PrecisionPolicy(digits=64), hoffman_shortcuts=False).build()
    for n in range(2, 11):
        for index in two_three_compositions(n):
            if index.count(3) <= 1:
                assert plain.phi_generator(index) == table.phi_generator(index), index


@pytest.mark.parametrize(
    "index,expected",
    [
        ((5,), {("zeta(2,3)",): Q(4, 5), ("zeta(3,2)",): Q(6, 5)}),
        (
            (7,),
            {
                ("zeta(2,2,3)",): Q(352, 151),
                ("zeta(2,3,2)",): Q(672, 151),
                ("zeta(3,2,2)",): Q(528, 151),
            },
        ),
    ],
)
def test_hoffman_decompositions(hoffman_table, index, expected):
    d = hoffman_table.decompose(ZetaComb({index: 1}))
    assert d.by_labels() == expected
    expr = Poly({(index,): 1}) - Poly({(_index(k[0]),): c for k, c in expected.items()})
    assert numerically_zero(expr)


def test_hoffman_every_element_round_trips(hoffman_table):
    for e in hoffman_table.basis.elements:
        d = hoffman_table.decompose(e.combination)
        assert d.by_labels() == {(e.label,): 1}


def test_zeta_3_3_3_has_nonzero_f9_coefficient(table):
    # Newton: e3 = (p1^3 - 3 p1 p2 + 2 p3)/6 with p_k = zeta(3k)
    assert table.coefficient(9, (3, 3, 3)) == Q(1, 3)
    newton = Poly({((3,), (3,), (3,)): Q(1, 6), ((3,), (6,)): Q(-1, 2), ((9,),): Q(1, 3)})
    assert table.verify_identity(ZetaComb({(3, 3, 3): 1}), newton).equal


# --- bad bases -------------------------------------------------------------------


def test_dependent_basis_raises_not_a_basis():
    els = [BasisElement.from_index(k) for k in [(2,), (3,), (5,), (7,)]]
    els.append(BasisElement.from_combination(ZetaComb({(3, 5): 1, (5, 3): 1, (8,): 1}), "xi8"))
    with pytest.raises(NotABasis) as exc:
        build(Basis("dependent", els), 8, P40)
    assert (exc.value.weight, exc.value.rank, exc.value.size) == (8, 3, 4)


def test_extra_element_raises_dimension_mismatch():
    els = default10().restricted(8).elements + [BasisElement.from_index((5, 3))]
    with pytest.raises(DimensionMismatch):
        build(Basis("extra", els), 8, P40)


def test_missing_element_raises_dimension_mismatch():
    els = [e for e in default10().restricted(8).elements if e.label != "zeta(3,5)"]
    with pytest.raises(DimensionMismatch):
        build(Basis("missing", els), 8, P40)


def test_basis_without_b0_is_invalid():
    els = [e for e in default10().elements if e.label != "zeta(5)"]
    with pytest.raises(InvalidBasis):
        build(Basis("no-b0", els), 10, P40)


def test_hoffman_basis_missing_element(table):
    b = hoffman(8)
    with pytest.raises(DimensionMismatch):
        build(Basis("short", b.elements[:-1], kind="linear"), 8, source=table)


def test_custom_basis_zeta_5_3_instead_of_3_5():
    els = [e for e in default10().restricted(8).elements if e.label != "zeta(3,5)"]
    t = build(Basis("alt", els + [BasisElement.from_index((5, 3))]), 8, P40)
    d = t.decompose(ZetaComb({(3, 5): 1}))
    assert numerically_zero(residual((3, 5), d))
    assert d.coefficient("zeta(5,3)") == -1


# --- precision escalation and identities -------------------------------------------


def test_escalation_recorded_in_certificate():
    t = build(default10(), 10, PrecisionPolicy(digits=30, max_den=10**15))
    d = t.decompose(ZetaComb({(4, 3, 3): 1}))
    assert d.by_labels() == GOLDEN_DECOMPOSITIONS[(4, 3, 3)]
    escalated = [c for c in t.certificates.values() if c.attempts and len(c.attempts) > 1]
    assert escalated
    for c in escalated:
        assert c.attempts[0]["outcome"].startswith("ambiguous")
        assert c.attempts[-1]["outcome"] == "accepted"
        assert c.attempts[-1]["digits"] > 30


def test_ambiguous_when_precision_cap_is_too_low():
    t = PhiTable(default10(), 10, PrecisionPolicy(digits=30, max_digits=30, max_den=10**15)).build()
    with pytest.raises(AmbiguousReconstruction) as exc:
        t.phi_generator((4, 3, 3))
    assert exc.value.attempts


def test_verify_identity_examples(table):
    stuffle_rep = table.verify_identity(parse_expression("zeta(3)*zeta(4)"), parse_expression("zeta(3,4)+zeta(4,3)+zeta(7)"))
    assert stuffle_rep.equal
    neq = table.verify_identity(parse_expression("zeta(2,3)"), parse_expression("zeta(3,2)"))
    assert not neq.equal and "not equal" in str(neq)
    same = table.verify_identity(parse_expression("zeta(4,3,3)"), parse_expression("zeta(4,3,3)"))
    assert same.equal and same.certificates == []


def test_decompose_rejects_mixed_weights(table):
    with pytest.raises(ValueError):
        table.decompose(parse_expression("zeta(2) + zeta(3)"))


def test_constants_and_zero(table):
    assert str(table.decompose(parse_expression("3/2"))) == "3/2"
    assert str(table.decompose(parse_expression("zeta(2,3) - zeta(2,3)"))) == "0"


def test_basis_json_round_trip():
    for b in (default10(), hoffman(6)):
        data = {"name": b.name, "kind": b.kind, "weights": b.to_json()}
        back = basis_from_json(json.loads(json.dumps(data)))
        assert [e.label for e in back.elements] == [e.label for e in b.elements]
        assert [e.combination for e in back.elements] == [e.combination for e in b.elements]
        assert back.kind == b.kind


def test_decomposition_json(table):
    d = table.decompose(ZetaComb({(4, 3, 3): 1}))
    data = json.loads(json.dumps(d.to_json()))
    assert data["weight"] == 10 and data["basis"] == "default10"
    coefs = {tuple((f["element"], f["power"]) for f in m["factors"]): Q(m["coef"]) for m in data["monomials"]}
    assert coefs[(("zeta(2)", 5),)] == Q(4336, 1925)
    assert {c["generator"] if isinstance(c["generator"], str) else tuple(c["generator"]) for c in data["certificates"]}
