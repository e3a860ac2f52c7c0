from hypothesis import given, strategies as st

from strategies import element
from superfda.errors import NotAnExtension, NotClosed
from superfda.graded_algebra import Bidegree
from superfda.superspace import (as_extension, c2_iia, c2_iib, c2_m, central_extension, doubled,
                                 fiber_integrate, iia10, iib10, m11, mink9, oxidize_element,
                                 verify_extension_tower)

import pytest


def test_sizes():
    assert len(m11().names()) == 11 + 32
    assert len(iia10().names()) == 10 + 32
    assert len(mink9().names()) == 9 + 32


def test_tower():
    assert all(e.ok for e in verify_extension_tower())


def test_two_cocycles_closed():
    for c, alg in ((c2_iia(), mink9()), (c2_iib(), mink9()), (c2_m(), iia10())):
        assert c.bidegree() == Bidegree(2, False)
        assert alg.d(c) == 0


def test_extension_errors():
    with pytest.raises(NotClosed):
        central_extension(mink9(), mink9().gen("e1") * mink9().gen("e2") + mink9().gen("psi1") * mink9().gen("e1"), "x")
    with pytest.raises(NotAnExtension):
        as_extension(mink9(), m11(), "e9")


def test_doubled():
    fp = doubled()
    assert {"e9A", "e9B"} <= set(fp.algebra.names())
    assert fp.p_A.is_valid() and fp.p_B.is_valid() and fp.base_map.is_valid()


@given(st.data())
def test_fiber_split_reconstructs(data):
    alg = iia10()
    x = data.draw(element(alg, max_terms=4, max_len=3))
    split = fiber_integrate(alg, "e9", x)
    eid = alg.table.id_of("e9")
    assert eid not in split.restriction.generators_used()
    assert eid not in split.integral.generators_used()
    assert oxidize_element(alg, "e9", split.restriction, split.integral) == x
