"""Exact identities of the coefficient algebras R, C, H and O."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinrep import algebras as alg


def q(*coeffs):
    return alg.kelem("H", coeffs)


def o(*coeffs):
    return alg.kelem("O", coeffs)


fractions = st.fractions(min_value=-10, max_value=10, max_denominator=8)


def elements(algebra):
    dim = alg.ALGEBRA_DIM[algebra]
    return st.tuples(*([fractions] * dim)).map(lambda t: alg.kelem(algebra, t))


# -- defining products -------------------------------------------------------


def test_quaternion_ij_is_k():
    assert alg.mul(q(0, 1, 0, 0), q(0, 0, 1, 0)) == q(0, 0, 0, 1)


def test_octonion_first_half_units_multiply_like_quaternions():
    # (i,0)*(j,0) = (k,0) by the doubling product with b = d = 0
    i0 = o(0, 1, 0, 0, 0, 0, 0, 0)
    j0 = o(0, 0, 1, 0, 0, 0, 0, 0)
    k0 = o(0, 0, 0, 1, 0, 0, 0, 0)
    assert alg.mul(i0, j0) == k0


def test_octonion_doubled_unit_squares_to_minus_one():
    # (0,1)*(0,1) = (-1, 0): a = c = 0, b = d = 1 in the doubling product
    e4 = alg.unit("O", 4)
    assert alg.mul(e4, e4) == alg.kelem("O", (-1, 0, 0, 0, 0, 0, 0, 0))


def test_conjugation_examples():
    assert alg.conj(q(0, 1, 0, 0)) == q(0, -1, 0, 0)
    # (i, 1) -> (-i, -1)
    x = o(0, 1, 0, 0, 1, 0, 0, 0)
    assert alg.conj(x) == o(0, -1, 0, 0, -1, 0, 0, 0)
    r = alg.kelem("R", (Fraction(3, 2),))
    assert alg.conj(r) == r


def test_norm_sq_examples():
    assert alg.norm_sq(q(1, 1, 1, 1)) == 4
    assert alg.norm_sq(alg.unit("O", 4)) == 1
    assert alg.norm_sq(alg.kelem("C", (3, 4))) == 25


def test_algebra_tag_mismatch_rejected():
    from spinrep.errors import InputError

    with pytest.raises(InputError):
        alg.mul(alg.one("H"), alg.one("C"))


# -- algebraic laws ----------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(elements("H"), elements("H"), elements("H"))
def test_quaternion_associativity(x, y, z):
    assert alg.mul(x, alg.mul(y, z)) == alg.mul(alg.mul(x, y), z)


def test_quaternion_associativity_exhaustive_on_basis():
    basis = alg.basis("H")
    for x in basis:
        for y in basis:
            for z in basis:
                assert alg.mul(x, alg.mul(y, z)) == alg.mul(alg.mul(x, y), z)


@settings(max_examples=60, deadline=None)
@given(elements("O"), elements("O"))
def test_octonion_alternativity(x, y):
    xx = alg.mul(x, x)
    assert alg.mul(x, alg.mul(x, y)) == alg.mul(xx, y)
    assert alg.mul(alg.mul(y, x), x) == alg.mul(y, xx)


def test_octonion_nonassociative_triple():
    # (e1 e2) e4 = -e1 (e2 e4): a nonzero associator
    e1, e2, e4 = alg.unit("O", 1), alg.unit("O", 2), alg.unit("O", 4)
    left = alg.mul(alg.mul(e1, e2), e4)
    right = alg.mul(e1, alg.mul(e2, e4))
    assert left == alg.neg(right) and not left.is_zero()


@settings(max_examples=60, deadline=None)
@given(elements("H"), elements("H"))
def test_conj_antiautomorphism_on_h(x, y):
    assert alg.conj(alg.mul(x, y)) == alg.mul(alg.conj(y), alg.conj(x))


@pytest.mark.parametrize("algebra", ["R", "C", "H", "O"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_norm_multiplicativity(algebra, data):
    x = data.draw(elements(algebra))
    y = data.draw(elements(algebra))
    assert alg.norm_sq(alg.mul(x, y)) == alg.norm_sq(x) * alg.norm_sq(y)


@pytest.mark.parametrize("algebra", ["C", "H", "O"])
def test_conj_involution_on_basis(algebra):
    for b in alg.basis(algebra):
        assert alg.conj(alg.conj(b)) == b


def test_basis_product_table_matches_doubling():
    for algebra in ("C", "H", "O"):
        d = alg.ALGEBRA_DIM[algebra]
        for i in range(d):
            for j in range(d):
                idx, sign = alg.basis_product(algebra, i, j)
                direct = alg.mul(alg.unit(algebra, i), alg.unit(algebra, j))
                assert direct == alg.scale(alg.unit(algebra, idx), sign)


def test_mul_matrix_is_multiplication():
    import random

    rng = random.Random(11)
    for algebra in ("C", "H", "O"):
        d = alg.ALGEBRA_DIM[algebra]
        x = alg.kelem(algebra, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d)])
        y = alg.kelem(algebra, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d)])
        left = alg.mul_matrix(x, "left").apply(list(y.coeffs))
        assert tuple(left) == alg.mul(x, y).coeffs
        right = alg.mul_matrix(x, "right").apply(list(y.coeffs))
        assert tuple(right) == alg.mul(y, x).coeffs
