import pytest
from hypothesis import given, strategies as st

from strategies import element, gaussian, homogeneous_element
from superfda import registry
from superfda.brane_cocycles import CoefficientWindow, l_s4, twisted_ku
from superfda.errors import DegreeMismatch, InvalidName, NotSquareZero, TableMismatch
from superfda.graded_algebra import (Bidegree, DgaMorphism, Element, check_morphism, compose,
                                     declare_algebra, homogeneous_basis, identity, inclusion,
                                     koszul_sign, solve_exactness)
from superfda.superspace import mink9

LS4 = l_s4()
KU = twisted_ku(CoefficientWindow(0, 6))
TOY = declare_algebra("toy", [("a", (1, False)), ("b", (1, True)), ("c", (2, False)), ("z", (0, True))],
                      lambda T: {"c": Element.generator(T, "a") * Element.generator(T, "b")
                                 * Element.generator(T, "b")})


def sign(x, y):
    return koszul_sign(x.bidegree(), y.bidegree())


def test_exterior_rule():
    assert Bidegree(1, False).exterior
    assert not Bidegree(1, True).exterior
    assert Bidegree(0, True).exterior
    assert not Bidegree(2, False).exterior


def test_squares():
    a, b = TOY.gens("a", "b")
    assert a * a == 0
    assert b * b != 0
    assert (b * b).bidegree() == Bidegree(2, False)


def test_mixed_signs():
    a, b, c = TOY.gens("a", "b", "c")
    assert a * b == -(b * a)  # (-1)^(1*1 + 0*1)
    assert b * c == c * b


def test_declaration_errors():
    with pytest.raises(DegreeMismatch):
        declare_algebra("bad", [("x", (1, False))], lambda T: {"x": Element.generator(T, "x")})
    with pytest.raises(InvalidName):
        declare_algebra("bad", [("2x", (1, False))], {})
    with pytest.raises(NotSquareZero):
        declare_algebra("bad", [("x", (1, False)), ("y", (2, False)), ("z", (3, False))],
                        lambda T: {"x": Element.generator(T, "y"), "y": Element.generator(T, "z")})


def test_table_mismatch():
    with pytest.raises(TableMismatch):
        LS4.gen("g4") + KU.gen("h3")


def test_lS4_presentation():
    g4 = LS4.gen("g4")
    assert LS4.d("g7") == (g4 * g4).scale("-1/2")
    assert LS4.d(g4) == 0


def test_basis_and_exactness():
    basis = homogeneous_basis(LS4, Bidegree(8, False))
    assert len(basis) == 1
    assert solve_exactness(LS4, LS4.gen("g4")) is None
    x = solve_exactness(KU, KU.d("w4"))
    assert KU.d(x) == KU.d("w4")


def test_morphism_checks():
    g4, g7 = LS4.gens("g4", "g7")
    good = DgaMorphism(LS4, LS4, {"g4": g4.scale(2), "g7": g7.scale(4)})
    bad = DgaMorphism(LS4, LS4, {"g4": g4.scale(2), "g7": g7.scale(2)})
    assert good.is_valid()
    e = check_morphism(bad, "m.bad")
    assert e.status == "fail" and e.counterexample
    assert compose(identity(LS4), good) == good


@given(element(TOY), element(TOY), element(TOY))
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(homogeneous_element(TOY), homogeneous_element(TOY))
def test_graded_commutative(x, y):
    if x and y:
        assert x * y == (y * x).scale(sign(x, y))


@given(homogeneous_element(TOY), element(TOY))
def test_leibniz(x, y):
    if x:
        n = x.bidegree().n
        assert TOY.d(x * y) == TOY.d(x) * y + (x * TOY.d(y)).scale((-1) ** n)


@pytest.mark.parametrize("name", registry.ALGEBRA_NAMES)
@given(data=st.data())
def test_d_squared_on_random_elements(name, data):
    alg = registry.algebra(name)
    x = data.draw(element(alg, max_terms=2, max_len=2))
    assert alg.d(alg.d(x)) == 0


@given(st.lists(gaussian(nonzero=True), min_size=2, max_size=4))
def test_composition_of_valid_morphisms_is_valid(scales):
    g4, g7 = LS4.gens("g4", "g7")
    maps = [DgaMorphism(LS4, LS4, {"g4": g4.scale(c), "g7": g7.scale(c * c)}) for c in scales]
    total = maps[0]
    prod = scales[0]
    for m, c in zip(maps[1:], scales[1:]):
        assert m.is_valid()
        total = compose(m, total)
        prod = prod * c
    assert total.is_valid()
    assert total.image("g4") == g4.scale(prod)


def test_window_inclusions_compose():
    small, mid, big = (twisted_ku(CoefficientWindow(0, k)) for k in (4, 6, 8))
    f, g = inclusion(small, mid), inclusion(mid, big)
    h = compose(g, f)
    assert h.is_valid() and h == inclusion(small, big)


def test_transport_by_name():
    x = mink9().gen("e3") * mink9().gen("psi1")
    assert x.to(registry.algebra("iia10").table).to(mink9().table) == x
