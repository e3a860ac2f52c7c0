import pytest
from hypothesis import given, strategies as st

from strategies import element, homogeneous_element
from superfda.brane_cocycles import CoefficientWindow, l_s4, twisted_ku
from superfda.cyclification import (OMEGA, adjunction_unit, cyclify, cyclify_morphism, fiber_sequence_check,
                                    free_loop, oxidize, reduce, shifted_name)
from superfda.errors import CurvedInput, IllegalShift
from superfda.graded_algebra import DgaMorphism, check_d_squared, compose, declare_algebra, identity, inclusion
from superfda.superspace import ext_9_to_iia, mink9

KU = twisted_ku(CoefficientWindow(0, 6))
C_KU = cyclify(KU)
C_LS4 = cyclify(l_s4())


def test_lS4_cyclified_presentation():
    c = C_LS4.result
    g4, g7, sg4, sg7, w = c.gens("g4", "g7", "s_g4", "s_g7", OMEGA)
    assert c.d(g4) == w * sg4
    assert c.d(g7) == (g4 * g4).scale("-1/2") + w * sg7
    assert c.d(sg4) == 0
    assert c.d(sg7) == g4 * sg4
    assert c.d(w) == 0


def test_d_squared_zero():
    for c in (C_KU, C_LS4):
        assert check_d_squared(c.result).ok
    assert check_d_squared(free_loop(l_s4())).ok


def test_fiber_sequences():
    assert fiber_sequence_check(KU, "f").ok
    assert fiber_sequence_check(l_s4(), "f").ok


def test_degree_zero_cannot_shift():
    z = declare_algebra("z", [("t", (0, True))], {})
    with pytest.raises(IllegalShift):
        cyclify(z)


@given(homogeneous_element(C_KU.result, max_len=3), element(C_KU.result, max_len=2))
def test_shift_is_a_derivation(x, y):
    if x:
        n = x.bidegree().n
        s = C_KU.s
        assert s(x * y) == s(x) * y + (x * s(y)).scale((-1) ** n)


@given(element(KU, max_len=3))
def test_d_cyc_formula(x):
    c = C_KU.result
    lifted = C_KU.lift(x)
    assert c.d(lifted) == C_KU.lift(KU.d(x)) + c.gen(OMEGA) * C_KU.s(lifted)


def test_functor():
    assert cyclify_morphism(identity(KU)) == identity(C_KU.result)
    small = twisted_ku(CoefficientWindow(0, 4))
    f, g = inclusion(small, KU), inclusion(KU, twisted_ku())
    assert cyclify_morphism(compose(g, f)) == compose(cyclify_morphism(g), cyclify_morphism(f))


def test_curved_input_rejected():
    unit = adjunction_unit(ext_9_to_iia())
    assert unit.curved
    with pytest.raises(CurvedInput):
        cyclify_morphism(unit)


def test_reduce_oxidize_on_the_string_cocycle():
    from superfda.brane_cocycles import iia_cocycles
    from superfda.superspace import c2_iib, fiber_integrate
    ext = ext_9_to_iia()
    line = declare_algebra("bR3", [("h3", (3, False))], {})
    f1 = iia_cocycles()["F1"]
    phi = DgaMorphism(line, ext.result, {"h3": f1})
    red = reduce(phi, ext)
    assert red.morphism.is_valid()
    assert oxidize(red, ext) == phi
    split = fiber_integrate(ext.result, "e9", f1)
    assert red.morphism.image("h3") == split.restriction.to(mink9().table)
    # the shifted generator lands on the integral, which is -c2 of the other theory
    assert red.morphism.image(shifted_name("h3")) == split.integral.to(mink9().table)
    assert split.integral.to(mink9().table) == -c2_iib()
