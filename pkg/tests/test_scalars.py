from fractions import Fraction

import pytest
from hypothesis import given

from strategies import gaussian
from superfda.scalars import GaussianRational, gq


def test_literal_forms():
    assert gq(-1, 0) * Fraction(1, 2) == GaussianRational("-1/2")
    assert GaussianRational(0, 1).to_text() == "i"
    assert GaussianRational(0, -1).to_text() == "-i"
    assert GaussianRational(Fraction(2, 3), 0).to_text() == "2/3"
    assert GaussianRational(0, Fraction(2, 3)).to_text() == "2/3*i"


def test_i_squared():
    i = GaussianRational(0, 1)
    assert i * i == -1
    assert i.inverse() == -i


def test_floats_rejected():
    with pytest.raises(TypeError):
        GaussianRational(0.5)
    with pytest.raises(TypeError):
        GaussianRational(1j)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(0).inverse()


@given(gaussian(), gaussian(), gaussian())
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(gaussian(nonzero=True))
def test_inverse(a):
    assert a * a.inverse() == 1
    assert (a.conjugate() * a).is_real()


@given(gaussian(), gaussian())
def test_hash_matches_equality(a, b):
    if a == b:
        assert hash(a) == hash(b)
    assert hash(GaussianRational(a.re)) == hash(a.as_fractions()[0])
