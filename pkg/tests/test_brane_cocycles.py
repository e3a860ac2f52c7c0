import pytest

from superfda.brane_cocycles import (CoefficientWindow, RELATIONS, calibrate_phases, calibrated_m_branes,
                                     iia_cocycles, iib_cocycles, is_identity_calibration, l_s4, relation_defect,
                                     t_duality_coefficients, twisted_ku, twisted_ku_shifted)
from superfda.errors import NoCalibration
from superfda.graded_algebra import Bidegree
from superfda.scalars import ONE, GaussianRational


def test_coefficient_algebras():
    ku = twisted_ku()
    assert ku.d("w2") == ku.gen("h3") * ku.gen("w0")
    sku = twisted_ku_shifted()
    assert sku.d("w3") == sku.gen("h3") * sku.gen("w1")
    bt = t_duality_coefficients()
    assert bt.d("h3") == -(bt.gen("c2") * bt.gen("ct2"))
    with pytest.raises(ValueError):
        twisted_ku_shifted(CoefficientWindow(0, 4))


def test_element_degrees():
    A, B = iia_cocycles(), iib_cocycles()
    assert A["F1"].bidegree() == Bidegree(3, False)
    for p in (0, 2, 4, 6, 8, 10):
        assert A[f"D{p}"].bidegree() == Bidegree(p + 2, False)
    for p in (1, 3, 5, 7, 9):
        assert B[f"D{p}"].bidegree() == Bidegree(p + 2, False)


def test_default_family_is_shared():
    assert iia_cocycles() is iia_cocycles()
    assert iia_cocycles(phases={"D2": -1}) is not iia_cocycles()


def test_iia_relations_hold():
    fam = iia_cocycles()
    for name, coef, factors in RELATIONS["iia"]:
        assert not relation_defect(fam, name, coef, factors), name


def test_top_of_the_iia_tower_is_not_zero():
    fam = iia_cocycles()
    d10 = fam.d("D10")
    assert d10 and d10 == fam.product(("F1", "D8"))


def test_calibration_finds_a_flipped_sign():
    flipped = iia_cocycles().rephased({"D2": GaussianRational(-1)})
    cal = calibrate_phases(flipped)
    assert {k: v for k, v in cal.items() if v != ONE} == {"D2": GaussianRational(-1)}
    assert is_identity_calibration(calibrate_phases(iia_cocycles()))


def test_calibration_reports_impossible_relations():
    fam = iia_cocycles()
    with pytest.raises(NoCalibration):
        calibrate_phases(fam, [("D2", ONE, ("F1", "D4"))])


def test_m_brane_calibration():
    fam, cal = calibrated_m_branes()
    assert {k: v for k, v in cal.items() if v != ONE} == {"M5": GaussianRational(-1)}
    assert not fam.d("M2")
    assert fam.d("M5") == fam.product(("M2", "M2")).scale("-1/2")
    assert fam.morphism.is_valid()
    assert fam.morphism.source == l_s4()
