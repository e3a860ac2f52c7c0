"""Super-Minkowski algebras, their central extensions and fiber integration."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .clifford import BilinearSpec, CliffordModel, bilinear_element, psi_names, standard_model
from .errors import NotAnExtension, NotClosed
from .graded_algebra import (Bidegree, DgaMorphism, Element, FreeDGA, adjoin_generators,
                             declare_algebra, inclusion, solve_exactness)
from .report import ReportEntry, entry

E1 = Bidegree(1, False)
PSI = Bidegree(1, True)


@dataclass(frozen=True)
class SuperMinkowskiSpec:
    """Bosonic dimension, which gamma matrices feed d e^a, and generator names."""
    dimension: int
    convention: str = "IIA"  # "IIA" uses Γ_a of the 11d model, "IIB" uses Γ^IIB_a
    label: str = ""
    e_names: Optional[tuple] = None

    def names(self) -> tuple:
        return self.e_names or tuple(f"e{a}" for a in range(self.dimension))


def super_minkowski(spec: SuperMinkowskiSpec, model: Optional[CliffordModel] = None) -> FreeDGA:
    model = model or standard_model()
    enames = spec.names()
    psis = psi_names(model.spinor_dim)
    decls = [(n, E1) for n in enames] + [(p, PSI) for p in psis]

    def diffs(table):
        probe = FreeDGA(table, None, "probe")  # only used for generator lookups
        return {name: bilinear_element(probe, model, BilinearSpec((a,), spec.convention), upper=True)
                for a, name in enumerate(enames)}

    return declare_algebra(spec.label or f"mink{spec.dimension}{spec.convention}", decls, diffs)


@lru_cache(maxsize=None)
def m11() -> FreeDGA:
    return super_minkowski(SuperMinkowskiSpec(11, "IIA", "m11"))


@lru_cache(maxsize=None)
def iia10() -> FreeDGA:
    return super_minkowski(SuperMinkowskiSpec(10, "IIA", "iia10"))


@lru_cache(maxsize=None)
def iib10() -> FreeDGA:
    return super_minkowski(SuperMinkowskiSpec(10, "IIB", "iib10"))


@lru_cache(maxsize=None)
def mink9() -> FreeDGA:
    return super_minkowski(SuperMinkowskiSpec(9, "IIA", "mink9"))


def spinor_two_form(alg: FreeDGA, which: str, model: Optional[CliffordModel] = None) -> Element:
    """ψ̄ M ψ for M one of 'G9' (c2^IIA), 'G9B' (c2^IIB), 'G10' (c2^M)."""
    model = model or standard_model()
    if which == "G9B":
        return bilinear_element(alg, model, BilinearSpec((9,), "IIB"))
    idx = {"G9": 9, "G10": 10}[which]
    return bilinear_element(alg, model, BilinearSpec((idx,), "IIA"))


def c2_iia(alg: Optional[FreeDGA] = None) -> Element:
    return spinor_two_form(alg or mink9(), "G9")


def c2_iib(alg: Optional[FreeDGA] = None) -> Element:
    return spinor_two_form(alg or mink9(), "G9B")


def c2_m(alg: Optional[FreeDGA] = None) -> Element:
    return spinor_two_form(alg or iia10(), "G10")


# --- extensions -------------------------------------------------------------

@dataclass
class ExtensionStep:
    """result = base with one generator `name` adjoined, d(name) = cocycle."""
    base: FreeDGA
    cocycle: Element
    name: str
    bidegree: Bidegree
    result: FreeDGA

    @property
    def fiber(self) -> Element:
        return self.result.gen(self.name)

    def projection(self) -> DgaMorphism:
        """CE-level map base -> result forgetting the new generator (inclusion of algebras)."""
        return inclusion(self.base, self.result, label=f"proj.{self.result.label}")

    def classifying_map(self) -> DgaMorphism:
        """CE(b^{p+1}R) -> CE(base), the single generator going to the cocycle."""
        n = self.cocycle.bidegree().n
        line = line_algebra(n)
        return DgaMorphism(line, self.base, {f"w{n}": self.cocycle}, label=f"cocycle.{self.name}")


def line_algebra(n: int) -> FreeDGA:
    """CE(b^{n-1}R): one closed generator in degree n."""
    return declare_algebra(f"bR{n}", [(f"w{n}", Bidegree(n, False))], {})


def central_extension(base: FreeDGA, cocycle: Element, name: str, label: Optional[str] = None) -> ExtensionStep:
    cocycle = base.lift(cocycle)
    bd = cocycle.bidegree()
    if bd is None or bd == "mixed" or bd.odd:
        raise NotClosed("extension cocycle must be a nonzero homogeneous even element")
    if base.d(cocycle):
        raise NotClosed(f"cocycle for {name} is not closed")
    newbd = Bidegree(bd.n - 1, False)
    result = adjoin_generators(base, [(name, newbd)], lambda T: {name: cocycle.to(T)},
                               label=label or f"{base.label}+{name}")
    return ExtensionStep(base, cocycle, name, newbd, result)


def as_extension(base: FreeDGA, total: FreeDGA, name: str) -> ExtensionStep:
    """View `total` as base + one generator, checking the claim."""
    if name not in total or set(total.names()) != set(base.names()) | {name}:
        raise NotAnExtension(f"{total.label} is not {base.label} plus {name}")
    for g in base.generators:
        if total.d_of(g.name) != base.d_of(g.name).to(total.table):
            raise NotAnExtension(f"differential of {g.name} differs between {base.label} and {total.label}")
    c = total.d_of(name)
    if any(total.table.decls[gid].name == name for gid in c.generators_used()):
        raise NotAnExtension("the new generator's differential involves itself")
    return ExtensionStep(base, c.to(base.table), name, total.bidegree(name), total)


@lru_cache(maxsize=None)
def ext_9_to_iia() -> ExtensionStep:
    return as_extension(mink9(), iia10(), "e9")


@lru_cache(maxsize=None)
def ext_9_to_iib() -> ExtensionStep:
    return as_extension(mink9(), iib10(), "e9")


@lru_cache(maxsize=None)
def ext_iia_to_m() -> ExtensionStep:
    """m11 seen as iia10 + e10 (same generators, different id order)."""
    base = iia10()
    total = m11()
    if set(total.names()) != set(base.names()) | {"e10"}:
        raise NotAnExtension("m11 is not iia10 + e10")
    return ExtensionStep(base, total.d_of("e10").to(base.table), "e10", Bidegree(1, False), total)


# --- fiber integration ------------------------------------------------------

@dataclass
class FiberSplit:
    restriction: Element
    integral: Element


def fiber_integrate(alg: FreeDGA, fiber: str, x: Element) -> FiberSplit:
    """x = restriction - e ∧ integral with neither part containing e."""
    x = alg.lift(x)
    eid = alg.table.id_of(fiber)
    if alg.table.decls[eid].bidegree != E1:
        raise ValueError(f"{fiber} is not an exterior (1,even) generator")
    table = alg.table
    npar, spar = table._npar, table._spar
    rest: dict = {}
    integ: dict = {}
    for m, c in x.terms.items():
        pos = next((k for k, (g, _) in enumerate(m) if g == eid), None)
        if pos is None:
            rest[m] = c
            continue
        # move e to the front: sign from passing the factors before it
        par = 0
        for g, e in m[:pos]:
            par += e * npar[g]  # e has bidegree (1,even): sign n_e*n_g + 0
        rem = m[:pos] + m[pos + 1:]
        v = c if par & 1 else -c  # m = ±e*rem and x ⊇ -e∧(integral)
        integ[rem] = v
    return FiberSplit(Element._trusted(table, rest), Element._trusted(table, integ))


def restrict(alg: FreeDGA, fiber: str, x: Element, base: FreeDGA) -> Element:
    return fiber_integrate(alg, fiber, x).restriction.to(base.table)


def integrate(alg: FreeDGA, fiber: str, x: Element, base: FreeDGA) -> Element:
    return fiber_integrate(alg, fiber, x).integral.to(base.table)


def oxidize_element(total: FreeDGA, fiber: str, restriction: Element, integral: Element) -> Element:
    r = restriction.to(total.table)
    i = integral.to(total.table)
    return r - total.gen(fiber) * i


# --- fiber products ---------------------------------------------------------

@dataclass
class FiberProduct:
    algebra: FreeDGA
    p_A: DgaMorphism  # CE(A-side) -> CE(doubled)
    p_B: DgaMorphism
    base_map: DgaMorphism  # CE(base) -> CE(doubled)


def fiber_product(ext_A: ExtensionStep, ext_B: ExtensionStep, name_A: str, name_B: str,
                  label: str = "doubled") -> FiberProduct:
    if ext_A.base.table != ext_B.base.table:
        raise NotAnExtension("extensions over different bases")
    base = ext_A.base
    alg = adjoin_generators(base, [(name_A, ext_A.bidegree), (name_B, ext_B.bidegree)],
                            lambda T: {name_A: ext_A.cocycle.to(T), name_B: ext_B.cocycle.to(T)}, label=label)
    p_A = inclusion(ext_A.result, alg, {ext_A.name: name_A}, label=f"p_A.{label}")
    p_B = inclusion(ext_B.result, alg, {ext_B.name: name_B}, label=f"p_B.{label}")
    return FiberProduct(alg, p_A, p_B, inclusion(base, alg, label=f"base.{label}"))


@lru_cache(maxsize=None)
def doubled() -> FiberProduct:
    return fiber_product(ext_9_to_iia(), ext_9_to_iib(), "e9A", "e9B", "doubled")


# --- checks -------------------------------------------------------------------

def verify_extension_tower() -> list[ReportEntry]:
    out = []
    b9 = mink9()
    for label, c, alg in (("c2M", c2_m(), iia10()), ("c2IIA", c2_iia(), b9), ("c2IIB", c2_iib(), b9)):
        ok = c.bidegree() == Bidegree(2, False) and not alg.d(c)
        out.append(entry(f"tower.closed.{label}", ok, f"{label} is a closed (2,even) element of {alg.label}"))
    for label, cocycle, direct in (("iia", c2_iia(), iia10()), ("iib", c2_iib(), iib10())):
        step = central_extension(b9, cocycle, "e9")
        # the extension appends e9 after the spinors; compare up to that reordering
        same = (set(step.result.names()) == set(direct.names()) and inclusion(step.result, direct).is_valid()
                and inclusion(direct, step.result).is_valid())
        out.append(entry(f"tower.route.{label}", same,
                         f"mink9 + e9 via c2 reproduces {direct.label} up to reordering"))
    step = central_extension(iia10(), c2_m(), "e10")
    ren = inclusion(m11(), step.result)
    inv = inclusion(step.result, m11())
    ok = ren.is_valid() and inv.is_valid()
    out.append(entry("tower.route.m", ok, "iia10 + e10 via c2^M agrees with m11 up to reordering"))
    return out


def non_exactness(alg: FreeDGA, x: Element) -> bool:
    """True when no potential exists within the full basis one degree below."""
    return solve_exactness(alg, x) is None
