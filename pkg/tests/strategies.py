"""Hypothesis strategies for scalars and elements of small free algebras."""

from hypothesis import strategies as st

from superfda.graded_algebra import Element
from superfda.scalars import GaussianRational

small_int = st.integers(min_value=-4, max_value=4)


@st.composite
def gaussian(draw, nonzero=False):
    re = draw(small_int)
    im = draw(small_int)
    den = draw(st.integers(min_value=1, max_value=3))
    c = GaussianRational(re, im) / den
    if nonzero and not c:
        c = GaussianRational(1)
    return c


@st.composite
def monomial_element(draw, alg, max_len=3):
    names = alg.names()
    k = draw(st.integers(min_value=0, max_value=max_len))
    x = Element.scalar(alg.table, draw(gaussian(nonzero=True)))
    for _ in range(k):
        x = x * alg.gen(draw(st.sampled_from(names)))
    return x


@st.composite
def element(draw, alg, max_terms=3, max_len=3):
    x = alg.zero()
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        x = x + draw(monomial_element(alg, max_len))
    return x


@st.composite
def homogeneous_element(draw, alg, max_len=3):
    """A nonzero element whose terms share one bidegree, or zero."""
    first = draw(monomial_element(alg, max_len))
    bd = first.bidegree()
    x = first
    for _ in range(draw(st.integers(min_value=0, max_value=3))):
        y = draw(monomial_element(alg, max_len))
        if y.bidegree() == bd:
            x = x + y
    return x
