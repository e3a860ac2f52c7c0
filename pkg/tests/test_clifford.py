import time

import pytest

from superfda.clifford import (MatrixQ, antisymmetrized_product, check_charge_conjugation,
                               check_clifford_relations, check_iib_relations, kron,
                               literal_antisymmetrization, standard_model)
from superfda.errors import IndexOutOfRange
from superfda.scalars import GaussianRational

I = GaussianRational(0, 1)


@pytest.fixture(scope="module")
def model():
    return standard_model()


def test_shape(model):
    assert model.dimension == 11
    assert model.spinor_dim == 32
    assert model.eta[0] == -1 and all(s == 1 for s in model.eta[1:])


def test_relations_fast(model):
    t0 = time.perf_counter()
    e = check_clifford_relations(model)
    assert e.ok and "66" in e.detail
    assert time.perf_counter() - t0 < 1.0


def test_charge_conjugation(model):
    assert check_charge_conjugation(model).ok


def test_iib_overlay(model):
    assert all(e.ok for e in check_iib_relations(model))
    assert model.gamma(9, "IIB") == (model.gamma(9) @ model.gamma(10)).scale(I)


def test_index_range(model):
    with pytest.raises(IndexOutOfRange):
        model.gamma(11)
    with pytest.raises(IndexOutOfRange):
        model.gamma(10, "IIB")


def test_antisymmetrized_matches_literal(model):
    for idx in [(0, 1), (2, 5, 7), (1, 3, 4, 9)]:
        assert antisymmetrized_product(model, idx) == literal_antisymmetrization(model, idx)
    assert antisymmetrized_product(model, (3, 3)).is_zero()


def test_kron_identity():
    a = MatrixQ.from_dense([[1, 2], [0, I]])
    assert kron(MatrixQ.identity(1), a) == a
    assert kron(a, MatrixQ.identity(2)).rows == 4
