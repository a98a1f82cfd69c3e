import random
from fractions import Fraction

import pytest

from mzvdecomp import falgebra as F
from mzvdecomp.coaction import (
    d_r,
    full_coproduct,
    full_coproduct_zeta,
    graded_lie_part,
    infinitesimal,
    infinitesimal_zeta,
    poly_mul,
    project,
    reduce_A_side,
)
from mzvdecomp.decomposer import Poly
from mzvdecomp.errors import CapExceeded
from mzvdecomp.words import ISymbol, ZetaComb, word_to_index, zeta_symbol

from conftest import convergent_words, random_convergent_word


def test_d_r_raw_cuts_of_zeta_2_3():
    cuts = d_r(3, zeta_symbol((2, 3)))
    assert (ISymbol(1, (0, 1, 0), 0), ISymbol(0, (1, 0), 1)) in cuts
    assert (ISymbol(0, (1, 0, 0), 1), ISymbol(0, (1, 0), 1)) in cuts
    assert len(cuts) == 3


def test_infinitesimal_fixtures():
    assert dict(infinitesimal_zeta(3, (2, 3)).items()) == {((3,), (2,)): 3}
    assert dict(infinitesimal_zeta(5, (4, 3)).items()) == {((5,), (2,)): 10}


def test_d7_of_zeta_4_3_3_projects_to_minus_32(table):
    t = infinitesimal_zeta(7, (4, 3, 3))
    projected = project(t, lambda g: table.coefficient(7, g))
    assert projected == ZetaComb({(3,): -32})


def test_one_three_family_has_no_infinitesimal_parts():
    for n in (1, 2, 3):
        index = (1, 3) * n
        for r in range(3, 4 * n, 2):
            assert not infinitesimal_zeta(r, index)
            cuts = d_r(r, zeta_symbol(index))
            if r % 4 == 3:
                # the cut spans a multiple of 4 letters of the periodic word
                assert all(sub.a0 == sub.a_end for sub, _ in cuts)
            else:
                # endpoints differ on some cuts; those terms cancel in pairs
                assert any(sub.a0 != sub.a_end for sub, _ in cuts)


def test_all_equal_letters_give_zero():
    for n in range(3, 9):
        for bit in (0, 1):
            for a0, a1 in [(0, 1), (1, 0), (0, 0)]:
                sym = ISymbol(a0, (bit,) * n, a1)
                for r in range(3, n, 2):
                    assert not infinitesimal(r, sym)


def test_section_six_one_partials(table):
    def partials(index):
        return {
            r: project(infinitesimal_zeta(r, index), lambda g, r=r: table.coefficient(r, g))
            for r in range(3, sum(index), 2)
        }

    p35 = partials((3, 5))
    assert p35[3] == ZetaComb() and p35[5] == ZetaComb({(3,): -5})
    p37 = partials((3, 7))
    assert p37[3] == ZetaComb()
    assert p37[5] == ZetaComb({(5,): -6})
    assert p37[7] == ZetaComb({(3,): -14})


def test_full_coproduct_small_cases():
    assert dict(full_coproduct_zeta((2,)).items()) == {((), (2,)): 1}
    assert dict(full_coproduct_zeta((3,)).items()) == {((), (3,)): 1, (((3,),), ()): 1}


def test_reduce_A_side_examples():
    assert reduce_A_side(ZetaComb({(2,): 1})) == ZetaComb()
    assert reduce_A_side(ZetaComb({(3,): 1})) == ZetaComb({(3,): 1})
    assert reduce_A_side(ZetaComb({(4,): 1})) == ZetaComb()
    assert reduce_A_side(ZetaComb({(3, 5): 2, (6,): 1})) == ZetaComb({(3, 5): 2})
    # monomial keys
    assert reduce_A_side(Poly({((2,), (3,)): 1, ((3,), (5,)): 1})) == Poly({((3,), (5,)): 1})


def test_full_coproduct_cap():
    with pytest.raises(CapExceeded):
        full_coproduct(ISymbol(0, (1,) + (0,) * 12, 1))


def _check_graded_agreement(w):
    index = word_to_index(w)
    n = len(w)
    full = full_coproduct_zeta(index)
    for r in range(3, n, 2):
        assert graded_lie_part(full, r) == infinitesimal_zeta(r, index), (w, r)


def test_full_coproduct_matches_infinitesimal_all_words_to_weight_8():
    for w in convergent_words(8):
        _check_graded_agreement(w)


def test_full_coproduct_matches_infinitesimal_weight_9_random():
    rng = random.Random(9)
    for _ in range(100):
        _check_graded_agreement(random_convergent_word(rng, 9, 9))


# --- comodule structure, compared through phi -------------------------------------


def _phi_A(table, mono):
    img = F.one()
    for g in mono:
        img = F.shuffle_mul(img, table.phi_generator(g))
    return F.FPoly((w, c) for w, c in img.items() if w.f2 == 0)


def _killed(mono):
    return any(len(g) == 1 and g[0] % 2 == 0 for g in mono)


def _coproduct_of_monomial(mono):
    """Coproduct in A (x) A of a product of generators."""
    acc = {((), ()): Fraction(1)}
    for g in mono:
        t = full_coproduct_zeta(g)
        nxt = {}
        for (l1, r1), c1 in acc.items():
            for (l2, r2), c2 in t.items():
                left = next(iter(poly_mul({l1: 1}, {l2: 1})))
                right = next(iter(poly_mul({r1: 1}, {((r2,) if r2 else ()): 1})))
                key = (left, right)
                nxt[key] = nxt.get(key, 0) + c1 * c2
        acc = nxt
    return {k: v for k, v in acc.items() if v and not _killed(k[0]) and not _killed(k[1])}


def _add3(acc, a, b, c, coef):
    for wa, ca in a.items():
        for wb, cb in b.items():
            for wc, cc in c.items():
                key = (wa, wb, wc)
                acc[key] = acc.get(key, 0) + coef * ca * cb * cc


def test_coassociativity_through_phi(table):
    for w in convergent_words(6):
        index = word_to_index(w)
        delta = full_coproduct_zeta(index)
        lhs, rhs = {}, {}
        for (left, right), c in delta.items():
            phi_right = table.phi_generator(right)
            for (l1, l2), d in _coproduct_of_monomial(left).items():
                _add3(lhs, _phi_A(table, l1), _phi_A(table, l2), phi_right, c * d)
            for (r1, r2), d in full_coproduct_zeta(right).items() if right else [(((), ()), 1)]:
                if _killed(r1):
                    continue
                _add3(rhs, _phi_A(table, left), _phi_A(table, r1), table.phi_generator(r2), c * d)
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        assert lhs == rhs, w


def test_phi_is_a_comodule_map(table):
    # deconcatenation of phi(xi) equals (phi_A (x) phi) applied to the coaction
    for w in convergent_words(8):
        index = word_to_index(w)
        expected = {}
        for (left, right), c in full_coproduct_zeta(index).items():
            a = _phi_A(table, left)
            b = table.phi_generator(right)
            for wa, ca in a.items():
                for wb, cb in b.items():
                    expected[(wa, wb)] = expected.get((wa, wb), 0) + c * ca * cb
        expected = {k: v for k, v in expected.items() if v}
        got = dict(F.deconcat_poly(table.phi_generator(index)).items())
        assert got == expected, w
