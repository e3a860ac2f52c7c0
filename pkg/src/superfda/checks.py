"""The registry of verification checks behind `superfda verify`."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional

from .report import ReportEntry, entry, timed


@dataclass(frozen=True)
class Options:
    threads: int = 1
    max_degree: int = 12
    window: Optional[tuple] = None  # (lo, hi) of the KU window for the family morphism checks
    blocks: bool = True  # also run the Fierz identity block by block


@dataclass(frozen=True)
class CheckGroup:
    name: str
    ids: tuple  # every id the group can emit
    run: Callable[[Options], list[ReportEntry]]


def _clifford(opts: Options) -> list[ReportEntry]:
    from .clifford import (check_charge_conjugation, check_clifford_relations, check_hermiticity_pattern,
                           check_iib_relations, standard_model)
    t0 = time.perf_counter()
    model = standard_model()
    out = [check_clifford_relations(model).timed(int((time.perf_counter() - t0) * 1000))]
    out.append(check_charge_conjugation(model))
    out += check_iib_relations(model)
    out += check_hermiticity_pattern(model)
    return out


def _dsquared(opts: Options) -> list[ReportEntry]:
    from . import registry
    from .graded_algebra import check_d_squared
    out = []
    for name in registry.ALGEBRA_NAMES + ("cyc(lS4)", "cyc(ku)", "cyc(sku)"):
        e = check_d_squared(registry.algebra(name))
        out.append(ReportEntry(f"dsquared.{name}", e.status, e.detail, e.counterexample))
    return out


def _tower(opts: Options) -> list[ReportEntry]:
    from .superspace import verify_extension_tower
    return verify_extension_tower()


def _mbranes(opts: Options) -> list[ReportEntry]:
    from .brane_cocycles import verify_m2m5
    return verify_m2m5(blocks=opts.blocks, threads=opts.threads)


def _windowed(theory: str, opts: Options):
    from .brane_cocycles import CoefficientWindow, iia_cocycles, iib_cocycles
    if opts.window is None:
        return iia_cocycles() if theory == "iia" else iib_cocycles()
    lo, hi = opts.window
    if theory == "iia":
        lo, hi = lo + (lo % 2), hi - (hi % 2)
        return iia_cocycles(CoefficientWindow(lo, hi))
    lo, hi = lo + 1 - (lo % 2), hi - 1 + (hi % 2)
    return iib_cocycles(CoefficientWindow(lo, hi))


def _iia(opts: Options) -> list[ReportEntry]:
    from .brane_cocycles import verify_iia_tower
    return verify_iia_tower(_windowed("iia", opts))


def _iib(opts: Options) -> list[ReportEntry]:
    from .brane_cocycles import verify_iib_tower
    return verify_iib_tower(_windowed("iib", opts))


def _nontrivial(opts: Options) -> list[ReportEntry]:
    from .brane_cocycles import non_triviality_entries
    return non_triviality_entries()


def _cyc(opts: Options) -> list[ReportEntry]:
    from .brane_cocycles import CoefficientWindow, l_s4, twisted_ku
    from .cyclification import cyclify, cyclify_morphism, fiber_sequence_check, free_loop
    from .graded_algebra import check_d_squared, compose, identity, inclusion
    from .tduality import verify_display
    out = [fiber_sequence_check(twisted_ku(), "cyc.fiberseq.ku"), fiber_sequence_check(l_s4(), "cyc.fiberseq.lS4")]
    loop = free_loop(l_s4())
    e = check_d_squared(loop)
    out.append(ReportEntry("cyc.loop.dsquared", e.status, e.detail, e.counterexample))
    out += verify_display(False) + verify_display(True)
    ku = twisted_ku()
    ok_id = cyclify_morphism(identity(ku)) == identity(cyclify(ku).result)
    out.append(entry("cyc.functor.identity", ok_id, "cyc(id) = id"))
    # functoriality on the KU window inclusions
    small = twisted_ku(CoefficientWindow(0, 6))
    mid = twisted_ku(CoefficientWindow(0, 8))
    f = inclusion(small, mid)
    g = inclusion(mid, ku)
    lhs = cyclify_morphism(compose(g, f))
    rhs = compose(cyclify_morphism(g), cyclify_morphism(f))
    out.append(entry("cyc.functor.composition", lhs == rhs and lhs.is_valid(),
                     "cyc(g f) = cyc(g) cyc(f) on the KU window inclusions"))
    return out


def _reduction(opts: Options) -> list[ReportEntry]:
    from .brane_cocycles import calibrated_m_branes, iia_cocycles, iib_cocycles
    from .cyclification import oxidize, reduce, verify_reduction
    from .superspace import ext_9_to_iia, ext_9_to_iib, ext_iia_to_m
    out = []
    cases = (("mbranes", calibrated_m_branes()[0].morphism, ext_iia_to_m()),
             ("iia", iia_cocycles().morphism, ext_9_to_iia()),
             ("iib", iib_cocycles().morphism, ext_9_to_iib()))
    for name, phi, ext in cases:
        t0 = time.perf_counter()
        es = verify_reduction(phi, ext, f"reduce.{name}")
        red = reduce(phi, ext)
        again = reduce(oxidize(red, ext), ext)
        es.append(entry(f"reduce.{name}.roundtrip", again == red, "reduce(oxidize(psi)) = psi"))
        ms = int((time.perf_counter() - t0) * 1000)
        out += [e if e.millis else e.timed(ms) for e in es]
    out += _mbrane_reduction_values()
    return out


def _mbrane_reduction_values() -> list[ReportEntry]:
    from .brane_cocycles import calibrated_m_branes, iia_cocycles, ns5_iia
    from .cyclification import reduce
    from .superspace import ext_iia_to_m
    m = reduce(calibrated_m_branes()[0].morphism, ext_iia_to_m()).morphism
    A = iia_cocycles()
    want = {"g4": A["D2"], "s_g4": A["F1"], "g7": ns5_iia(), "s_g7": A["D4"], "omega2": A["D0"]}
    bad = [k for k, v in want.items() if m.image(k) != v]
    return [entry("reduce.mbranes.values", not bad,
                  "g4 -> mu_D2, s g4 -> mu_F1, g7 -> mu_NS5, s g7 -> mu_D4, omega2 -> mu_D0"
                  if not bad else f"mismatch on {bad}")]


def _tduality(opts: Options) -> list[ReportEntry]:
    from .tduality import verify_t_duality_theorem
    return verify_t_duality_theorem()


def _corr(opts: Options) -> list[ReportEntry]:
    from .tduality import verify_correspondence
    return verify_correspondence()


def _hori(opts: Options) -> list[ReportEntry]:
    from .tduality import verify_hori
    return verify_hori(opts.max_degree)


def _t2(opts: Options) -> list[ReportEntry]:
    from .tduality import verify_tduality_fiber_sequence
    return verify_tduality_fiber_sequence()


def _tfold(opts: Options) -> list[ReportEntry]:
    from .tduality import verify_tfold
    return [verify_tfold("A"), verify_tfold("B")]


def _ftheory(opts: Options) -> list[ReportEntry]:
    from .tduality import verify_f_theory_diagram, verify_s_duality
    return verify_f_theory_diagram() + verify_s_duality()


def _format(opts: Options) -> list[ReportEntry]:
    from . import registry
    from .fda_format import parse_with_diagnostics, serialize
    bad = []
    for name in registry.ALGEBRA_NAMES:
        alg = registry.algebra(name)
        text = serialize(alg, name)
        doc, diags = parse_with_diagnostics(text)
        if doc is None or doc.algebras[name] != alg or serialize(doc.algebras[name], name) != text:
            bad.append(name)
    out = [entry("format.roundtrip", not bad, "serialize/parse fixpoint on every built-in algebra"
                 if not bad else f"round trip fails for {bad}")]
    bad = []
    for name in registry.FAMILY_NAMES:
        text = registry.family_bundle(name)
        doc, diags = parse_with_diagnostics(text)
        fam = registry.family(name)
        if (doc is None or doc.serialize() != text or doc.morphisms[name].images != fam.morphism.images
                or any(doc.elements[f"mu_{k}"][1] != v for k, v in fam.elements.items())):
            bad.append(name)
    out.append(entry("format.families", not bad, "serialize/parse fixpoint on every cocycle family"
                     if not bad else f"round trip fails for {bad}"))
    return out


_MBR = ("mbranes.calibration", "mbranes.m2_closed", "mbranes.fierz", "mbranes.fierz_blocks")
_RED = tuple(f"reduce.{n}.{k}" for n in ("mbranes", "iia", "iib") for k in ("valid", "unit", "oxidize", "roundtrip"))

GROUPS = (
    CheckGroup("clifford", ("clifford.relations", "clifford.charge_conjugation", "clifford.iib.identity",
                            "clifford.iib.not_clifford", "clifford.iib.sigma_invariance",
                            "clifford.iib.rotation_invariance")
               + tuple(f"clifford.hermiticity.p{p}" for p in range(6)), _clifford),
    CheckGroup("dsquared", ("dsquared.",), _dsquared),
    CheckGroup("tower", ("tower.closed.c2M", "tower.closed.c2IIA", "tower.closed.c2IIB", "tower.route.iia",
                         "tower.route.iib", "tower.route.m"), _tower),
    CheckGroup("mbranes", _MBR, _mbranes),
    CheckGroup("iia", tuple(f"iia.tower.{n}" for n in ("F1", "D0", "D2", "D4", "D6", "D8", "D10"))
               + ("iia.morphism",), _iia),
    CheckGroup("iib", tuple(f"iib.tower.{n}" for n in ("F1", "D1", "D3", "D5", "D7", "D9")) + ("iib.morphism",),
               _iib),
    CheckGroup("nontrivial", tuple(f"nontrivial.{n}" for n in ("c2M", "c2IIA", "c2IIB", "M2", "F1IIA")),
               _nontrivial),
    CheckGroup("cyc", ("cyc.fiberseq.ku", "cyc.fiberseq.lS4", "cyc.loop.dsquared", "cyc.display.ku",
                       "cyc.display.ku.forward", "cyc.display.ku.backward", "cyc.display.sku",
                       "cyc.display.sku.forward", "cyc.display.sku.backward", "cyc.functor.identity",
                       "cyc.functor.composition"), _cyc),
    CheckGroup("reduce", _RED + ("reduce.mbranes.values",), _reduction),
    CheckGroup("tduality", ("tduality.slice", "tduality.d1", "tduality.d3", "tduality.d5", "tduality.d7",
                            "tduality.d9", "tduality.reduced.iia", "tduality.reduced.iib", "tduality.phi",
                            "tduality.phi.inverse", "tduality.global"), _tduality),
    CheckGroup("corr", ("corr.leibniz", "corr.poincare", "corr.f1form", "corr.nu"), _corr),
    CheckGroup("hori", ("hori.identity", "hori.closedform", "hori.expform", "hori.unit", "hori.twisted.iia",
                        "hori.twisted.iib"), _hori),
    CheckGroup("t2", ("t2.fiberseq",), _t2),
    CheckGroup("tfold", ("tfold.a", "tfold.b"), _tfold),
    CheckGroup("ftheory", ("ftheory.diagram", "ftheory.sduality"), _ftheory),
    CheckGroup("format", ("format.roundtrip", "format.families"), _format),
)


def matches(check_id: str, selector: str) -> bool:
    if selector == "all":
        return True
    if selector.endswith("."):
        return check_id.startswith(selector)
    return check_id == selector or check_id.startswith(selector + ".")


def _group_matches(group: CheckGroup, selector: str) -> bool:
    if selector == "all":
        return True
    for i in group.ids:
        if i.endswith("."):  # open-ended id families
            if selector.startswith(i) or i.startswith(selector.rstrip(".") + "."):
                return True
        elif matches(i, selector):
            return True
    return False


def select(selector: str) -> list[CheckGroup]:
    return [g for g in GROUPS if _group_matches(g, selector)]


def run_group(group: CheckGroup, opts: Options) -> list[ReportEntry]:
    try:
        return timed(lambda: group.run(opts))
    except Exception as exc:  # a crashing check is a failed check, not a crashed run
        return [ReportEntry(f"{group.name}.error", "fail", f"{type(exc).__name__}: {exc}", "value reported")]
