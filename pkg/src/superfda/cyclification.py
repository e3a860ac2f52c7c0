"""Free loop and cyclification functors, and the reduction/oxidation adjunction."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional

from .errors import CurvedInput, IllegalShift, NotAnExtension, SliceConditionViolated
from .graded_algebra import (SHIFT_S, Bidegree, DerivationSpec, DgaMorphism, Element, FreeDGA,
                             GeneratorTable, apply_derivation, check_morphism, compose, declare_algebra)
from .report import ReportEntry, entry
from .scalars import ONE
from .superspace import ExtensionStep, fiber_integrate

OMEGA = "omega2"


def shifted_name(name: str) -> str:
    return "s_" + name


@dataclass
class CyclifiedAlgebra:
    base: FreeDGA
    result: FreeDGA
    shift_map: dict  # base generator id -> result generator id of s v
    omega: Optional[int]  # id of ω₂, None for the plain free loop algebra

    @property
    def algebra(self) -> FreeDGA:
        return self.result

    def s(self, x: Element) -> Element:
        """The shift derivation on the result, s(s v) = 0 and s ω₂ = 0."""
        return apply_derivation(shift_derivation(self), self.result.lift(x))

    def lift(self, x: Element) -> Element:
        """Base element viewed in the result (unshifted generators keep their names)."""
        return x.to(self.result.table)


def _shift_values(table: GeneratorTable, base: FreeDGA) -> dict:
    return {table.index[g.name]: Element.generator(table, shifted_name(g.name)) for g in base.generators}


_SHIFT_CACHE: dict = {}


def shift_derivation(c: CyclifiedAlgebra) -> DerivationSpec:
    key = id(c.result.table)
    hit = _SHIFT_CACHE.get(key)
    if hit is None or hit[0] is not c.result.table:
        hit = (c.result.table, DerivationSpec(c.result.table, SHIFT_S, _shift_values(c.result.table, c.base)))
        _SHIFT_CACHE[key] = hit
    return hit[1]


def _loop_decls(h: FreeDGA) -> list:
    decls = [(g.name, g.bidegree) for g in h.generators]
    for g in h.generators:
        if g.bidegree.n < 1:
            raise IllegalShift(f"cannot shift {g.name} of bidegree {g.bidegree} down by one")
        decls.append((shifted_name(g.name), Bidegree(g.bidegree.n - 1, g.bidegree.odd)))
    return decls


def _build(h: FreeDGA, with_omega: bool, label: str) -> CyclifiedAlgebra:
    decls = _loop_decls(h)
    if with_omega:
        decls.append((OMEGA, Bidegree(2, False)))

    def diffs(table):
        s = DerivationSpec(table, SHIFT_S, _shift_values(table, h))
        out = {}
        w = Element.generator(table, OMEGA) if with_omega else None
        for g in h.generators:
            dv = h.differential.value(g.id).to(table)
            sv = Element.generator(table, shifted_name(g.name))
            out[g.name] = dv + w * sv if with_omega else dv
            out[shifted_name(g.name)] = -apply_derivation(s, dv)
        return out

    alg = declare_algebra(label, decls, diffs)
    shift = {g.id: alg.table.index[shifted_name(g.name)] for g in h.generators}
    return CyclifiedAlgebra(h, alg, shift, alg.table.index.get(OMEGA) if with_omega else None)


_CYC: dict = {}


def free_loop(h: FreeDGA) -> FreeDGA:
    return _build(h, False, f"loop({h.label})").result


def cyclify(h: FreeDGA) -> CyclifiedAlgebra:
    hit = _CYC.get(id(h))
    if hit is None or hit.base is not h:
        hit = _CYC[id(h)] = _build(h, True, f"cyc({h.label})")
    return hit


def cyclify_morphism(f: DgaMorphism) -> DgaMorphism:
    """CE(cyc h1) -> CE(cyc h2) from f: CE(h1) -> CE(h2): v -> f v, s v -> s(f v), ω₂ -> ω₂."""
    if f.curved:
        raise CurvedInput("cyclification of a curved morphism is not defined")
    A = cyclify(f.source)
    B = cyclify(f.target)
    imgs = {}
    for g in f.source.generators:
        img = B.lift(f.images[g.id])
        imgs[g.id] = img
        imgs[A.shift_map[g.id]] = B.s(img)
    imgs[A.omega] = B.result.gen(OMEGA)
    return DgaMorphism(A.result, B.result, imgs, label=f"cyc({f.label})")


def fiber_sequence_check(h: FreeDGA, check_id: Optional[str] = None) -> ReportEntry:
    """cyc h -> bR is a generator inclusion and setting ω₂ = 0 gives the free loop algebra."""
    from .superspace import line_algebra
    c = cyclify(h)
    loop = free_loop(h)
    line = line_algebra(2)
    proj = DgaMorphism(line, c.result, {"w2": c.result.gen(OMEGA)}, label="cyc->bR")
    problems = []
    if not proj.is_valid():
        problems.append("omega2 inclusion is not a chain map")
    # generator inclusion: the image is a single generator, hence injective on spans
    if c.omega is None:
        problems.append("no omega2 generator")
    quotient_ok = True
    for g in loop.generators:
        v = c.result.d_of(g.name)
        kept = {m: x for m, x in v.terms.items() if all(gid != c.omega for gid, _ in m)}
        if Element._trusted(c.result.table, kept) != loop.d_of(g.name).to(c.result.table):
            quotient_ok = False
            problems.append(f"omega2 = 0 does not give the loop differential on {g.name}")
            break
    ok = not problems
    return entry(check_id or f"cyc.fiberseq.{h.label}", ok,
                 "loop -> cyc -> bR: omega2 is a generator inclusion and omega2 = 0 recovers the loop algebra"
                 if ok else "; ".join(problems))


# --- slices, reduction and oxidation -------------------------------------------------------

@dataclass
class SlicedMorphism:
    """CE(cyc h) -> CE(g) with ω₂ sent to the slice cocycle c₂."""
    morphism: DgaMorphism
    slice_cocycle: Element

    def __post_init__(self):
        w = self.morphism.image(OMEGA)
        if w != self.slice_cocycle.to(self.morphism.target.table):
            raise SliceConditionViolated("omega2 is not sent to the slice cocycle")

    def __eq__(self, other):
        if not isinstance(other, SlicedMorphism):
            return NotImplemented
        return self.morphism == other.morphism and self.slice_cocycle == other.slice_cocycle

    __hash__ = None


def _check_extension(phi: DgaMorphism, ext: ExtensionStep) -> None:
    if phi.target.table != ext.result.table:
        raise NotAnExtension(f"{phi.label} does not land in {ext.result.label}")
    if ext.bidegree != Bidegree(1, False):
        raise NotAnExtension("reduction needs an extension by a 2-cocycle")


def reduce(phi: DgaMorphism, ext: ExtensionStep) -> SlicedMorphism:
    _check_extension(phi, ext)
    c = cyclify(phi.source)
    base_t = ext.base.table
    imgs = {}
    for g in phi.source.generators:
        split = fiber_integrate(ext.result, ext.name, phi.images[g.id])
        imgs[g.id] = split.restriction.to(base_t)
        imgs[c.shift_map[g.id]] = split.integral.to(base_t)
    imgs[c.omega] = ext.cocycle
    return SlicedMorphism(DgaMorphism(c.result, ext.base, imgs, label=f"reduce({phi.label})"), ext.cocycle)


def oxidize(psi: SlicedMorphism, ext: ExtensionStep) -> DgaMorphism:
    if psi.slice_cocycle != ext.cocycle.to(psi.slice_cocycle.table):
        raise SliceConditionViolated("slice cocycle differs from the extension cocycle")
    m = psi.morphism
    h = _cyclified_base(m.source)
    c = cyclify(h)
    e = ext.result.gen(ext.name)
    T = ext.result.table
    imgs = {g.id: m.images[g.id].to(T) - e * m.images[c.shift_map[g.id]].to(T) for g in h.generators}
    return DgaMorphism(h, ext.result, imgs, label=f"oxidize({m.label})")


def _cyclified_base(alg: FreeDGA) -> FreeDGA:
    for c in _CYC.values():
        if c.result.table == alg.table:
            return c.base
    raise NotAnExtension(f"{alg.label} is not a cyclified algebra")


def adjunction_unit(ext: ExtensionStep) -> DgaMorphism:
    """Curved CE(cyc ĝ) -> CE(g): v -> v, e -> 0, s v -> 0, s e -> -1, ω₂ -> c₂."""
    c = cyclify(ext.result)
    g = ext.base
    imgs = {}
    for gen in ext.result.generators:
        if gen.name == ext.name:
            imgs[gen.id] = g.zero()
            imgs[c.shift_map[gen.id]] = g.scalar(-ONE)
        else:
            imgs[gen.id] = g.gen(gen.name)
            imgs[c.shift_map[gen.id]] = g.zero()
    imgs[c.omega] = ext.cocycle
    return DgaMorphism(c.result, g, imgs, curved=True, label=f"unit({ext.name})")


def reduce_via_unit(phi: DgaMorphism, ext: ExtensionStep) -> DgaMorphism:
    """The composite of cyc(φ) with the adjunction unit, as an algebra map."""
    return compose(adjunction_unit(ext), cyclify_morphism(phi))


def verify_reduction(phi: DgaMorphism, ext: ExtensionStep, check_id: str) -> list[ReportEntry]:
    """reduce is valid, agrees with the unit composite and oxidizes back to φ."""
    red = reduce(phi, ext)
    out = [check_morphism(red.morphism, f"{check_id}.valid")]
    via = reduce_via_unit(phi, ext)
    diff = red.morphism.first_difference(via)
    out.append(entry(f"{check_id}.unit", diff is None, "reduce equals the unit composite",
                     None if diff is None else f"{diff[0]}: {diff[1].first_term().text()}"))
    back = oxidize(red, ext)
    diff = phi.first_difference(back)
    out.append(entry(f"{check_id}.oxidize", diff is None, "oxidize(reduce(phi)) = phi",
                     None if diff is None else f"{diff[0]}: {diff[1].first_term().text()}"))
    return out


def verify_naturality_square(g: DgaMorphism, phi: DgaMorphism, ext: ExtensionStep,
                             f: Optional[DgaMorphism] = None, check_id: str = "cyc.naturality") -> ReportEntry:
    """Reducing φ∘g equals reducing φ and precomposing with cyc(g), then optionally applying f.

    g: CE(h2) -> CE(h1), φ: CE(h1) -> CE(ĝ), f: CE(g) -> CE(g') a map over bR.
    """
    red = reduce(phi, ext).morphism
    lhs = compose(red, cyclify_morphism(g))
    rhs = reduce(compose(phi, g), ext).morphism
    if f is not None:
        lhs, rhs = compose(f, lhs), compose(f, rhs)
    diff = lhs.first_difference(rhs)
    return entry(check_id, diff is None, "both paths around the naturality square agree",
                 None if diff is None else f"{diff[0]}: {diff[1].first_term().text()}")


def cyc_display_map(h: FreeDGA, target: FreeDGA, rename: Mapping[str, Element]) -> DgaMorphism:
    """CE(target display) -> CE(cyc h) sending each display generator to a cyclified element."""
    c = cyclify(h)
    return DgaMorphism(target, c.result, {k: v.to(c.result.table) if isinstance(v, Element) else v
                                          for k, v in rename.items()}, label=f"display->{c.result.label}")
