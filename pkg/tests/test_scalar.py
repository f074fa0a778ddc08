"""Exact field arithmetic: examples, field axioms and canonical forms."""
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hopfforge.scalar import (GF, QQ, QQ_q, FieldMismatchError, RatFunc, Residue, field_add,
                              field_from_name, field_inv, field_mul, field_neg, poly_gcd,
                              scalar_pow)

Q_SYM = sympy.Symbol("q")


def test_rational_addition():
    assert field_add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_prime_field_product():
    assert field_mul(Residue(3, 5), Residue(4, 5)) == Residue(2, 5)


def test_ratfunc_cancels_common_factor():
    q = QQ_q.q
    x = (q * q - 1) / (q - 1)
    assert x == q + 1
    assert x.den == (Fraction(1),)
    assert str(x) == "(1 + q)"


def test_powers():
    assert scalar_pow(QQ_q.q, -2) == RatFunc.monomial(1, -2)
    assert str(scalar_pow(QQ_q.q, -2)) == "q^-2"
    assert scalar_pow(Fraction(3), 0) == 1
    assert scalar_pow(Residue(2, 5), 4) == Residue(1, 5)


@pytest.mark.parametrize("zero", [Fraction(0), Residue(0, 7), QQ_q.zero])
def test_zero_has_no_inverse(zero):
    with pytest.raises(ZeroDivisionError):
        field_inv(zero)
    with pytest.raises(ZeroDivisionError):
        scalar_pow(zero, -1)


@pytest.mark.parametrize("x, y", [
    (Fraction(1), Residue(1, 5)),
    (Residue(1, 5), Residue(1, 7)),
    (QQ_q.q, Fraction(2)),
    (Residue(2, 3), QQ_q.q),
])
def test_mixed_fields_rejected(x, y):
    with pytest.raises(FieldMismatchError):
        field_add(x, y)
    with pytest.raises(FieldMismatchError):
        field_mul(x, y)


def test_gf_needs_prime_modulus():
    with pytest.raises(ValueError):
        GF(6)


def test_field_names():
    assert field_from_name("rational") is QQ
    assert field_from_name("ratfunc") is QQ_q
    assert field_from_name("gf:5") is GF(5)
    with pytest.raises(ValueError):
        field_from_name("reals")


# strategies ----------------------------------------------------------------

small = st.integers(-6, 6)
rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 20))
residues = st.builds(Residue, st.integers(0, 4), st.just(5))


@st.composite
def ratfuncs(draw):
    num = draw(st.lists(small, max_size=4))
    den = draw(st.lists(small, min_size=1, max_size=3).filter(any))
    return RatFunc(tuple(map(Fraction, num)), tuple(map(Fraction, den)))


FIELDS = {"rational": rationals, "gf5": residues, "ratfunc": ratfuncs()}


def _axioms(x, y, z):
    assert field_add(field_add(x, y), z) == field_add(x, field_add(y, z))
    assert field_mul(field_mul(x, y), z) == field_mul(x, field_mul(y, z))
    assert field_add(x, y) == field_add(y, x)
    assert field_mul(x, y) == field_mul(y, x)
    assert field_mul(x, field_add(y, z)) == field_add(field_mul(x, y), field_mul(x, z))
    assert field_add(x, field_neg(x)) == 0
    if x:
        assert field_mul(x, field_inv(x)) == 1


@settings(max_examples=1000)
@given(rationals, rationals, rationals)
def test_field_axioms_rationals(x, y, z):
    _axioms(x, y, z)


@settings(max_examples=1000)
@given(residues, residues, residues)
def test_field_axioms_gf5(x, y, z):
    _axioms(x, y, z)


@settings(max_examples=1000)
@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_axioms_ratfunc(x, y, z):
    _axioms(x, y, z)


# Q(q) against sympy as an independent canonical form -------------------------

def _to_sympy(x: RatFunc):
    num = sum(sympy.Rational(c.numerator, c.denominator) * Q_SYM ** k for k, c in enumerate(x.num))
    den = sum(sympy.Rational(c.numerator, c.denominator) * Q_SYM ** k for k, c in enumerate(x.den))
    return num / den


@settings(max_examples=300)
@given(ratfuncs(), ratfuncs())
def test_ratfunc_matches_sympy(x, y):
    assert sympy.cancel(_to_sympy(x * y) - _to_sympy(x) * _to_sympy(y)) == 0
    assert sympy.cancel(_to_sympy(x + y) - (_to_sympy(x) + _to_sympy(y))) == 0


@settings(max_examples=300)
@given(ratfuncs())
def test_ratfunc_reduced_and_monic(x):
    num, den = sympy.fraction(sympy.cancel(_to_sympy(x)))
    assert sympy.degree(den, Q_SYM) == len(x.den) - 1
    assert x.den[-1] == 1
    if x:
        assert len(poly_gcd(x.num, x.den)) == 1


@settings(max_examples=300)
@given(ratfuncs(), st.lists(small, min_size=1, max_size=3).filter(any))
def test_canonicalize_idempotent_and_representation_free(x, k):
    factor = tuple(map(Fraction, k))
    from hopfforge.scalar import _pmul
    scaled = RatFunc(_pmul(x.num, factor), _pmul(x.den, factor))
    assert scaled == x
    assert hash(scaled) == hash(x)
    again = RatFunc(x.num, x.den)
    assert (again.num, again.den) == (x.num, x.den)


@settings(max_examples=300)
@given(residues.filter(bool), st.integers(-8, 8))
def test_residue_powers_match_integer_arithmetic(x, m):
    expected = pow(x.v, m, 5)
    assert scalar_pow(x, m) == Residue(expected, 5)
