from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from multielim.exactfield import (
    DEFAULT_PRIME,
    FieldElement,
    FieldMismatchError,
    PrimeField,
    QQ,
    parse_field,
)

F7 = PrimeField(7)
FP = PrimeField(DEFAULT_PRIME)

rationals = st.fractions(max_denominator=10**6).filter(lambda q: abs(q) < 10**9)
residues = st.integers(min_value=0, max_value=DEFAULT_PRIME - 1)


def test_rational_sum():
    a = FieldElement.parse("1/3", QQ)
    b = FieldElement.parse("1/6", QQ)
    assert a + b == Fraction(1, 2)


def test_inverse_mod_seven():
    assert FieldElement(3, F7).inverse() == 5


def test_product_then_quotient():
    a, b = FieldElement(Fraction(22, 7), QQ), FieldElement(-5, QQ)
    assert (a * b) / b == a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        FieldElement(1, QQ) / FieldElement(0, QQ)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, F7).inverse()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        FieldElement(1, QQ) + FieldElement(1, F7)
    with pytest.raises(FieldMismatchError):
        FieldElement(1, F7) * FieldElement(1, PrimeField(11))


def test_canonical_representatives():
    assert FieldElement(-1, F7).value == 6
    assert FieldElement(Fraction(1, 2), F7).value == 4
    assert FieldElement(Fraction(-4, -6), QQ).value == Fraction(2, 3)


def test_parse_field():
    assert parse_field("Q") == QQ
    assert parse_field("Fp") == PrimeField(DEFAULT_PRIME)
    assert parse_field("Fp:101").p == 101
    for bad in ("Fp:100", "R", "Fp:x"):
        with pytest.raises(ValueError):
            parse_field(bad)


def test_string_round_trip():
    for text in ("22/7", "-3", "0"):
        assert str(FieldElement.parse(text, QQ)) == text
    assert str(FieldElement.parse("-3", F7)) == "4"


@given(rationals, rationals, rationals)
def test_rational_axioms(a, b, c):
    x, y, z = (FieldElement(v, QQ) for v in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x
    if b != 0:
        assert (x * y) / y == x


@given(residues, residues, residues)
def test_prime_field_axioms(a, b, c):
    x, y, z = (FieldElement(v, FP) for v in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert 0 <= (x - y).value < DEFAULT_PRIME


@given(st.integers(min_value=1, max_value=DEFAULT_PRIME - 1))
def test_prime_field_inverse(a):
    x = FieldElement(a, FP)
    assert x * x.inverse() == 1
