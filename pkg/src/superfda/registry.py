"""Names of the built-in algebras, families and morphisms."""

from __future__ import annotations

import re
from typing import Callable, Optional

from .errors import UnknownName
from .graded_algebra import FreeDGA


def _algebras() -> dict[str, Callable[[], FreeDGA]]:
    from . import brane_cocycles as bc
    from . import superspace as ss
    from . import tduality as td
    return {
        "lS4": bc.l_s4,
        "ku": bc.twisted_ku,
        "sku": bc.twisted_ku_shifted,
        "bT1": bc.t_duality_coefficients,
        "m11": ss.m11,
        "iia10": ss.iia10,
        "iib10": ss.iib10,
        "mink9": ss.mink9,
        "doubled": lambda: ss.doubled().algebra,
        "string_iia": lambda: td.string_gerbe("iia"),
        "string_iib": lambda: td.string_gerbe("iib"),
        "corrA": lambda: td.build_correspondence().gerbe_a,
        "corrB": lambda: td.build_correspondence().gerbe_b,
        "tfoldA": lambda: td.tfold_algebra("A")[0],
        "tfoldB": lambda: td.tfold_algebra("B")[0],
        "ftheory": td.f_theory_algebra,
        "cycku": lambda: td.cyc_ku_display(*td.COMMON, shifted=False),
        "cycsku": lambda: td.cyc_ku_display(*td.COMMON, shifted=True),
    }


ALGEBRA_NAMES = ("lS4", "ku", "sku", "bT1", "m11", "iia10", "iib10", "mink9", "doubled", "string_iia",
                 "string_iib", "corrA", "corrB", "tfoldA", "tfoldB", "ftheory", "cycku", "cycsku")
FAMILY_NAMES = ("mbranes", "iia", "iib")

_CYC = re.compile(r"cyc\((.+)\)\Z")


def algebra(name: str) -> FreeDGA:
    """A built-in algebra by name; `cyc(NAME)` gives the cyclification."""
    m = _CYC.match(name)
    if m:
        from .cyclification import cyclify
        return cyclify(algebra(m.group(1))).result
    table = _algebras()
    if name not in table:
        raise UnknownName(f"no built-in algebra named {name!r}")
    return table[name]()


def lookup(name: str) -> Optional[FreeDGA]:
    try:
        return algebra(name)
    except UnknownName:
        return None


def family(name: str):
    from . import brane_cocycles as bc
    if name == "mbranes":
        return bc.calibrated_m_branes()[0]
    if name == "iia":
        return bc.iia_cocycles()
    if name == "iib":
        return bc.iib_cocycles()
    raise UnknownName(f"no cocycle family named {name!r}")


def family_bundle(name: str) -> str:
    """A family as one document: coefficient and spacetime algebras, the elements and the morphism.

    Elements whose tower relation says they are closed are declared as cocycles.
    """
    from .brane_cocycles import RELATIONS
    from .fda_format import ident, serialize_bundle
    fam = family(name)
    closed = {n for n, _, factors in RELATIONS[name] if not factors}
    src, tgt = fam.coefficients, fam.source
    tname = ident(tgt.label)
    return serialize_bundle(
        algebras=[(ident(src.label), src), (tname, tgt)],
        elements=[(f"mu_{k}", tname, v, k in closed) for k, v in fam.elements.items()],
        morphisms=[(name, fam.morphism)])


def all_algebras() -> list[FreeDGA]:
    return [algebra(n) for n in ALGEBRA_NAMES]
