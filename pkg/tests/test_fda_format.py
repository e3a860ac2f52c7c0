import random

import pytest

from superfda import registry
from superfda.brane_cocycles import l_s4, t_duality_coefficients
from superfda.fda_format import (FdaSyntaxError, check_document, element_text, parse, parse_algebra,
                                 parse_element, parse_with_diagnostics, serialize, serialize_bundle)
from superfda.superspace import m11
from superfda.tduality import cyc_ku_display, phi_t, COMMON

LS4_TEXT = "algebra lS4 { gen g4 : (4,even); gen g7 : (7,even); d g4 = 0; d g7 = -1/2*g4*g4; }"


def test_lS4_text():
    assert serialize(l_s4(), "lS4") == LS4_TEXT


def test_unit_element():
    assert element_text(l_s4().one()) == "1"


def test_m11_round_trip():
    text = serialize(m11(), "m11")
    assert parse_algebra(text) == m11()
    assert serialize(parse_algebra(text), "m11") == text


def test_user_bT1():
    alg = parse_algebra("""
        # the T-duality coefficient algebra
        algebra bT1 {
          gen c2 : (2,even); gen ct2 : (2,even); gen h3 : (3,even);
          d h3 = -c2*ct2;
        }""")
    assert alg == t_duality_coefficients()


def test_powers_and_gaussian_literals():
    alg = l_s4()
    x = parse_element("(1/2 + 2/3*i)*g4^2 - i*g7*g4", alg)
    assert parse_element(element_text(x), alg) == x
    assert x == parse_element("(1/2+2/3*i)*g4*g4 - i*g4*g7", alg)


def test_degree_mismatch_located():
    doc, diags = parse_with_diagnostics("algebra A {\n  gen x : (1,even);\n  d x = x;\n}")
    assert doc is None
    assert diags[0].line == 3 and "DegreeMismatch" in diags[0].message


def test_d_squared_rejected():
    text = "algebra A { gen x : (1,even); gen y : (2,even); gen z : (3,even); d x = y; d y = z; }"
    doc, diags = parse_with_diagnostics(text)
    assert doc is None and "NotSquareZero" in diags[0].message
    assert diags[0].line == 1 and diags[0].column > 1
    with pytest.raises(FdaSyntaxError):
        parse(text)


def test_exterior_exponent_rejected():
    doc, diags = parse_with_diagnostics("algebra A { gen x : (1,even); gen y : (2,even); d y = x^2; }")
    assert doc is None and "exterior" in diags[0].message


def test_reserved_i():
    doc, diags = parse_with_diagnostics("algebra A { gen i : (2,even); }")
    assert doc is None and "reserved" in diags[0].message


def test_check_document_flags_open_cocycle():
    doc = parse("""
        algebra A { gen x : (1,even); gen y : (2,even); gen z : (2,even); d z = x*y; }
        cocycle good in A = y;
        cocycle bad in A = z;
    """)
    entries = {e.id: e for e in check_document(doc)}
    assert entries["doc.good.closed"].ok
    bad = entries["doc.bad.closed"]
    assert bad.status == "fail" and bad.counterexample == "x*y"


def test_phi_t_document():
    A = cyc_ku_display(*COMMON, shifted=False)
    B = cyc_ku_display(*COMMON, shifted=True)
    text = serialize_bundle(algebras=[("cycku", A), ("cycsku", B)], morphisms=[("phiT", phi_t())])
    doc = parse(text)
    assert doc.serialize() == text
    assert all(e.ok for e in check_document(doc))


def test_resolver_for_builtins():
    doc = parse("cocycle c in lS4 = g4;", registry.lookup)
    assert all(e.ok for e in check_document(doc))


def test_morphism_block():
    doc = parse("""
        algebra A { gen a : (2,even); }
        morphism f : lS4 -> A { g4 -> a*a; g7 -> 0; }
    """, registry.lookup)
    entries = check_document(doc)
    assert any(e.id == "doc.f.valid" and e.status == "fail" for e in entries)


def test_serialize_is_injective_on_a_sample():
    alg = l_s4()
    g4, g7 = alg.gens("g4", "g7")
    xs = [g4, g4.scale(2), g4 * g4, g7, g4 + g7, g4 - g7, g4 * g7, alg.one(), alg.zero()]
    texts = [element_text(x) for x in xs]
    assert len(set(texts)) == len(texts)


# --- fuzzing ---------------------------------------------------------------

SEEDS = [
    LS4_TEXT,
    serialize(t_duality_coefficients(), "bT1", pretty=True),
    serialize(cyc_ku_display(0, 4, False), "small", pretty=True),
    "algebra A { gen x : (1,even); gen y : (2,odd); gen z : (3,even); d z = (1/2+i)*x*y; }\n"
    "cocycle c in A = x;\nelement e in A = y^2 - 2/3*i*x*y;\n"
    "morphism f : A -> A { x -> x; y -> y; z -> z; }\n",
]
ALPHABET = "{}();:,*^+-/#=>\n 0123456789ixyzdgenalgebramorphismcocycleoddeven_"


def _mutate(rng: random.Random, text: str) -> str:
    chars = list(text)
    for _ in range(rng.randint(1, 4)):
        op = rng.randrange(5)
        pos = rng.randrange(len(chars) + 1)
        if op == 0 and chars:
            del chars[min(pos, len(chars) - 1)]
        elif op == 1:
            chars.insert(pos, rng.choice(ALPHABET))
        elif op == 2 and chars:
            a, b = sorted((rng.randrange(len(chars)), rng.randrange(len(chars))))
            chars[a:a] = chars[a:b + 1]  # duplicate a slice
        elif op == 3:
            chars = chars[:pos]
        else:
            chars.insert(pos, rng.choice(["é", "\x00", "9" * 30, "^999", "((((", "1/0"]))
    return "".join(chars)


def test_fuzz_never_crashes():
    rng = random.Random(20261016)
    accepted = rejected = 0
    for k in range(10_000):
        text = _mutate(rng, SEEDS[k % len(SEEDS)])
        doc, diags = parse_with_diagnostics(text)
        if doc is None:
            assert diags, text
            assert all(d.line >= 1 and d.column >= 1 for d in diags)
            rejected += 1
        else:
            assert not diags
            accepted += 1
    assert accepted and rejected


def test_deep_nesting_is_a_diagnostic():
    doc, diags = parse_with_diagnostics("cocycle c in lS4 = " + "(" * 5000 + "g4" + ")" * 5000 + ";",
                                        registry.lookup)
    assert doc is None and diags
