from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from purecubic.field import (
    FieldElement,
    MixedParents,
    conjugate_product,
    exact_sign,
    maximal_order_signs,
    norm,
    sign3,
)
from purecubic.radicand import normalize

R1430 = normalize(1430)


def test_norm_1430_witness():
    beta = FieldElement.of(-28490, -13120, 1389, R1430)
    assert norm(beta) == 1100


def test_basis_relations():
    for d in (2, 12, 1430, 833):
        r = normalize(d)
        dl, dbl = FieldElement.delta(r), FieldElement.delta_bar(r)
        assert dl * dl == dbl * r.b
        assert dbl * dbl == dl * r.a
        assert (dl * dbl).coords == (r.a * r.b, 0, 0)
        assert norm(dl) == r.a * r.b * r.b


def test_mixed_parents():
    with pytest.raises(MixedParents):
        FieldElement.one(normalize(2)) + FieldElement.one(normalize(3))


def test_maximal_order_signs_1430():
    assert maximal_order_signs(R1430) == (-1, 1)
    e = FieldElement.of(Fraction(1, 3), Fraction(-1, 3), Fraction(1, 3), R1430)
    assert e.is_integral() and not e.is_integral_o0()
    assert not FieldElement.of(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3), R1430).is_integral()


def test_sign_near_cancellation():
    # a large unit of Q(cbrt 1430) minus its float approximation
    eps_inv = (6074553925441, 689057082849, -109019548011)
    assert sign3(eps_inv, 1430, 1) == 1
    assert sign3(tuple(-c for c in eps_inv), 1430, 1) == -1
    e = FieldElement.of(*eps_inv, R1430)
    assert 0 < float(e) < 1e-12
    assert exact_sign(0, 0, 0, R1430) == 0


def test_sign_degenerate_small():
    r = normalize(2)
    # 5 - 4 cbrt 2 > 0 (cbrt 2 = 1.2599...), 5 - 4 * 1.26 < 0 only for larger root
    assert exact_sign(5, -4, 0, r) == -1
    assert exact_sign(126, -100, 0, r) == 1


radicands = st.sampled_from([2, 3, 5, 6, 7, 10, 12, 17, 19, 28, 43, 1430, 833, 12673])
coord = st.integers(-10**6, 10**6)
element = st.tuples(coord, coord, coord)


@given(radicands, element, element)
def test_norm_multiplicative(d, u, v):
    r = normalize(d)
    a = FieldElement.of(*u, r)
    b = FieldElement.of(*v, r)
    assert norm(a * b) == norm(a) * norm(b)


@given(radicands, element)
def test_conjugate_product_gives_norm(d, u):
    r = normalize(d)
    a = FieldElement.of(*u, r)
    assert (a * conjugate_product(a)).coords == (norm(a), 0, 0)


@given(radicands, element)
def test_exact_sign_matches_high_precision(d, u):
    import mpmath

    r = normalize(d)
    with mpmath.workdps(80):
        v = u[0] + u[1] * mpmath.cbrt(r.a * r.b * r.b) + u[2] * mpmath.cbrt(r.a * r.a * r.b)
    expect = 0 if v == 0 else (1 if v > 0 else -1)
    assert sign3(u, r.a, r.b) == expect


@given(radicands, element.filter(any))
def test_inverse_and_division(d, u):
    r = normalize(d)
    a = FieldElement.of(*u, r)
    assert (a * a.inverse()).coords == (1, 0, 0)
    assert (a**3 / a) == a * a
    assert a ** -2 == (a * a).inverse()


@given(radicands, element)
def test_charpoly_annihilates(d, u):
    r = normalize(d)
    a = FieldElement.of(*u, r)
    c2, c1, c0 = a.charpoly()
    assert (a**3 + a * a * c2 + a * c1 + c0).coords == (0, 0, 0)
