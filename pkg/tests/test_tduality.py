import pytest

from superfda.errors import DegreeCapExceeded, WindowMismatch
from superfda.graded_algebra import compose, identity
from superfda.scalars import GaussianRational
from superfda.tduality import (COMMON, boxed_identity, build_correspondence, cyc_ku_display, display_iso,
                               exp_twisted, hori_transform, phi_t, phi_t_inverse, reduced_display,
                               solve_rotation_constant, string_gerbe, tfold_algebra, verify_display, wname)


def test_names():
    assert wname(3) == "w3" and wname(-1) == "wm1"


def test_display_presentation():
    A = cyc_ku_display(0, 4, shifted=False)
    c2, ct2, h3 = A.gens("c2", "ct2", "h3")
    assert A.d(h3) == -(c2 * ct2)
    # even labels are the original KU ones and pair with c2
    assert A.d("w2") == h3 * A.gen("w0") + c2 * A.gen("w1")
    assert A.d("w1") == ct2 * A.gen("w0")


def test_display_isomorphisms():
    for shifted in (False, True):
        assert all(e.ok for e in verify_display(shifted))
    fwd, bwd = display_iso(False)
    assert compose(bwd, fwd) == identity(fwd.source)


def test_phi_t():
    phi = phi_t()
    assert phi.is_valid()
    assert compose(phi_t_inverse(), phi) == identity(phi.source)
    with pytest.raises(WindowMismatch):
        phi_t((0, 9), (1, 9))


def test_boxed_d5():
    assert not boxed_identity(3)


def test_global_statement():
    assert compose(reduced_display("iib"), phi_t()) == reduced_display("iia")


def test_correspondence():
    c = build_correspondence()
    assert c.nu.is_valid() and c.nu_inverse.is_valid()
    assert compose(c.nu_inverse, c.nu) == identity(c.nu.source)


def test_tfold_matches_gerbe():
    P, leg = tfold_algebra("A")
    assert P == build_correspondence().gerbe_a and leg.is_valid()


def test_hori_low_degrees():
    xa, xb = exp_twisted("iia", 6), exp_twisted("iib", 5)
    for n, x in xa.items():
        assert hori_transform(x, 6) == xb.get(n - 1, string_gerbe("iib").zero())


def test_hori_cap():
    x = exp_twisted("iia", 8)[8]
    with pytest.raises(DegreeCapExceeded):
        hori_transform(x, 6)


def test_rotation_constant():
    assert solve_rotation_constant() == GaussianRational("-1/2")


@pytest.mark.parametrize("degree", [6, 8])
def test_twisted_differential_matches_direct(degree):
    from superfda.tduality import twisted_differential
    x = exp_twisted("iia")[degree]
    assert twisted_differential("iia", degree) == string_gerbe("iia").d(x)
