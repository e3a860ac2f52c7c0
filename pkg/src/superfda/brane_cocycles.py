"""Coefficient algebras and the super p-brane cocycle families."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence

from .clifford import CliffordModel, antisymmetrized_product, form_element, standard_model
from .errors import NoCalibration
from .graded_algebra import (Bidegree, DgaMorphism, Element, FreeDGA, check_morphism,
                             declare_algebra, solve_exactness)
from .report import ReportEntry, entry
from .scalars import I, ONE, GaussianRational
from .superspace import ext_iia_to_m, fiber_integrate, iia10, iib10, m11

HALF = GaussianRational(1, 0) / 2


# --- coefficient algebras ------------------------------------------------------

@lru_cache(maxsize=None)
def l_s4() -> FreeDGA:
    return declare_algebra("lS4", [("g4", (4, False)), ("g7", (7, False))],
                           lambda T: {"g7": (Element.generator(T, "g4") ** 2).scale(-HALF)})


@dataclass(frozen=True)
class CoefficientWindow:
    """Brane labels k covered by the ω chain; generator w_k has degree k+2."""
    lo: int
    hi: int

    def labels(self) -> list[int]:
        return list(range(self.lo, self.hi + 1, 2))


KU_WINDOW = CoefficientWindow(0, 10)
SKU_WINDOW = CoefficientWindow(1, 9)


def _ku(label: str, window: CoefficientWindow) -> FreeDGA:
    ks = window.labels()
    decls = [("h3", (3, False))] + [(f"w{k}", (k + 2, False)) for k in ks]

    def diffs(T):
        h3 = Element.generator(T, "h3")
        return {f"w{k}": h3 * Element.generator(T, f"w{k - 2}") for k in ks if k - 2 >= window.lo}

    return declare_algebra(label, decls, diffs)


@lru_cache(maxsize=None)
def twisted_ku(window: CoefficientWindow = KU_WINDOW) -> FreeDGA:
    if window.lo % 2:
        raise ValueError("the KU chain uses even labels")
    return _ku("ku" if window == KU_WINDOW else f"ku_{window.lo}_{window.hi}", window)


@lru_cache(maxsize=None)
def twisted_ku_shifted(window: CoefficientWindow = SKU_WINDOW) -> FreeDGA:
    if window.lo % 2 == 0:
        raise ValueError("the shifted KU chain uses odd labels")
    return _ku("sku" if window == SKU_WINDOW else f"sku_{window.lo}_{window.hi}", window)


@lru_cache(maxsize=None)
def t_duality_coefficients() -> FreeDGA:
    """CE(bT1): c2, ct2 closed and d h3 = -c2 ct2."""
    return declare_algebra("bT1", [("c2", (2, False)), ("ct2", (2, False)), ("h3", (3, False))],
                           lambda T: {"h3": -(Element.generator(T, "c2") * Element.generator(T, "ct2"))})


# --- families -----------------------------------------------------------------

@dataclass
class CocycleFamily:
    label: str
    elements: dict[str, Element]
    source: FreeDGA  # the spacetime algebra the cocycles live in
    coefficients: FreeDGA
    morphism: DgaMorphism  # CE(coefficients) -> CE(source)
    phases: dict = field(default_factory=dict)
    _d: dict = field(default_factory=dict, repr=False)
    _prod: dict = field(default_factory=dict, repr=False)

    def __getitem__(self, name: str) -> Element:
        return self.elements[name]

    def d(self, name: str) -> Element:
        v = self._d.get(name)
        if v is None:
            v = self._d[name] = self.source.d(self.elements[name])
        return v

    def product(self, names: tuple) -> Element:
        v = self._prod.get(names)
        if v is None:
            v = self.source.one()
            for n in names:
                v = v * self.elements[n]
            self._prod[names] = v
        return v

    def rephased(self, phases: Mapping[str, GaussianRational], morphism_builder=None) -> "CocycleFamily":
        """Scale elements by phases, carrying cached derivatives and products along."""
        ph = {k: GaussianRational.coerce(v) for k, v in phases.items()}
        lam = lambda n: ph.get(n, ONE)  # noqa: E731
        els = {k: v.scale(lam(k)) for k, v in self.elements.items()}
        dd = {k: v.scale(lam(k)) for k, v in self._d.items()}
        pr = {}
        for names, v in self._prod.items():
            c = ONE
            for n in names:
                c = c * lam(n)
            pr[names] = v.scale(c)
        combined = {k: self.phases.get(k, ONE) * v for k, v in ph.items()}
        mor = DgaMorphism(self.morphism.source, self.morphism.target,
                          {g.id: self.morphism.images[g.id].scale(lam(_image_name(self, g.name)))
                           for g in self.morphism.source.generators}, label=self.morphism.label)
        return CocycleFamily(self.label, els, self.source, self.coefficients, mor, {**self.phases, **combined}, dd, pr)


def _image_name(family: "CocycleFamily", gen: str) -> str:
    """Element name behind a coefficient generator: g4->M2, g7->M5, h3->F1, w_k->D_k."""
    return {"g4": "M2", "g7": "M5", "h3": "F1"}.get(gen, "D" + gen[1:] if gen.startswith("w") else gen)


# (name, rank p, prefactor, trailing matrices)
M_SPECS = [("M2", 2, I, ()), ("M5", 5, ONE, ())]
IIA_SPECS = [("F1", 1, I, ("G10",)), ("D0", 0, ONE, ("G10",)), ("D2", 2, I, ()), ("D4", 4, ONE, ("G10",)),
             ("D6", 6, I, ()), ("D8", 8, ONE, ("G10",)), ("D10", 10, I, ())]
IIB_SPECS = [("F1", 1, I, ("G10",)), ("D1", 1, I, ("G9",)), ("D3", 3, ONE, ("G9", "G10")),
             ("D5", 5, I, ("G9",)), ("D7", 7, ONE, ("G9", "G10")), ("D9", 9, I, ("G9",))]


def build_form(alg: FreeDGA, p: int, prefactor, convention: str, trailing: tuple,
               dims: int, model: Optional[CliffordModel] = None) -> Element:
    model = model or standard_model()
    return form_element(alg, model, p, prefactor, range(dims), lambda a: f"e{a}", convention, trailing)


def _phases(phases: Optional[Mapping[str, GaussianRational]], name: str) -> GaussianRational:
    return GaussianRational.coerce(phases.get(name, ONE)) if phases else ONE


@lru_cache(maxsize=None)
def _m_elements():
    alg = m11()
    return {name: build_form(alg, p, c, "IIA", t, 11) for name, p, c, t in M_SPECS}


def m_brane_cocycles() -> CocycleFamily:
    els = dict(_m_elements())
    alg = m11()
    coeff = l_s4()
    mor = DgaMorphism(coeff, alg, {"g4": els["M2"], "g7": els["M5"]}, label="mbranes")
    return CocycleFamily("mbranes", els, alg, coeff, mor)


@lru_cache(maxsize=None)
def _iia_elements():
    alg = iia10()
    return {name: build_form(alg, p, c, "IIA", t, 10) for name, p, c, t in IIA_SPECS}


@lru_cache(maxsize=None)
def _iib_elements():
    alg = iib10()
    return {name: build_form(alg, p, c, "IIB", t, 10) for name, p, c, t in IIB_SPECS}


@lru_cache(maxsize=None)
def ns5_iia() -> Element:
    """μ_NS5^IIA: the restriction of the (calibrated) μ_M5 along e10."""
    step = ext_iia_to_m()
    m5 = calibrated_m_branes()[0]["M5"]
    return fiber_integrate(step.result, "e10", m5).restriction.to(step.base.table)


def _family(label, els, alg, coeff, ku_labels, prefix="D"):
    imgs = {"h3": els["F1"]}
    for k in ku_labels:
        imgs[f"w{k}"] = els.get(f"{prefix}{k}", alg.zero())
    mor = DgaMorphism(coeff, alg, imgs, label=label)
    return CocycleFamily(label, els, alg, coeff, mor)


def iia_cocycles(window: CoefficientWindow = KU_WINDOW,
                 phases: Optional[Mapping[str, GaussianRational]] = None) -> CocycleFamily:
    """The IIA family; without phases the instance is shared so its caches are reused."""
    return _iia_family(window) if not phases else _iia_build(window, phases)


@lru_cache(maxsize=None)
def _iia_family(window: CoefficientWindow) -> CocycleFamily:
    return _iia_build(window, None)


def _iia_build(window, phases) -> CocycleFamily:
    els = {k: v.scale(_phases(phases, k)) for k, v in _iia_elements().items()}
    return _family("iia", els, iia10(), twisted_ku(window), window.labels())


def iib_cocycles(window: CoefficientWindow = SKU_WINDOW,
                 phases: Optional[Mapping[str, GaussianRational]] = None) -> CocycleFamily:
    return _iib_family(window) if not phases else _iib_build(window, phases)


@lru_cache(maxsize=None)
def _iib_family(window: CoefficientWindow) -> CocycleFamily:
    return _iib_build(window, None)


def _iib_build(window, phases) -> CocycleFamily:
    els = {k: v.scale(_phases(phases, k)) for k, v in _iib_elements().items()}
    return _family("iib", els, iib10(), twisted_ku_shifted(window), window.labels())


# --- tower checks -------------------------------------------------------------

# (element, coefficient, factors): d μ_X = coefficient * Π μ_factors; no factors means closed
RELATIONS = {
    "mbranes": [("M2", ONE, ()), ("M5", -HALF, ("M2", "M2"))],
    "iia": [("F1", ONE, ()), ("D0", ONE, ()), ("D2", ONE, ("F1", "D0")), ("D4", ONE, ("F1", "D2")),
            ("D6", ONE, ("F1", "D4")), ("D8", ONE, ("F1", "D6"))],
    "iib": [("F1", ONE, ()), ("D1", ONE, ()), ("D3", ONE, ("F1", "D1")), ("D5", ONE, ("F1", "D3")),
            ("D7", ONE, ("F1", "D5")), ("D9", ONE, ("F1", "D7"))],
}


def tower_relations(theory: str) -> list:
    return list(RELATIONS[theory])


def relation_defect(family: CocycleFamily, name: str, coef, factors: tuple) -> Element:
    lhs = family.d(name)
    if not factors:
        return lhs
    return lhs - family.product(factors).scale(coef)


def _describe(name, coef, factors) -> str:
    if not factors:
        return f"d mu_{name} = 0"
    c = "" if coef == ONE else f"{GaussianRational.coerce(coef).to_text()} "
    return f"d mu_{name} = {c}" + " ".join(f"mu_{f}" for f in factors)


def _tower_entries(theory: str, family: CocycleFamily) -> list[ReportEntry]:
    out = []
    for name, coef, factors in RELATIONS[theory]:
        t0 = time.perf_counter()
        diff = relation_defect(family, name, coef, factors)
        ms = int((time.perf_counter() - t0) * 1000)
        what = _describe(name, coef, factors)
        e = entry(f"{theory}.tower.{name}", not diff, what + ("" if not diff else f" fails ({len(diff)} terms)"),
                  diff.first_term())
        out.append(e.timed(ms))
    return out


def verify_iia_tower(family: Optional[CocycleFamily] = None) -> list[ReportEntry]:
    family = family or iia_cocycles()
    out = _tower_entries("iia", family)
    t0 = time.perf_counter()
    dd10 = family.d("D10")
    prod = family.product(("F1", "D8"))
    same = dd10 == prod
    out.append(ReportEntry("iia.tower.D10", "pass" if same else "fail",
                           f"d mu_D10 ({len(dd10)} terms) equals mu_F1 mu_D8 ({len(prod)} terms): {same}; "
                           f"both vanish: {not dd10 and not prod}",
                           None if same else (dd10 - prod).first_term().text(),
                           int((time.perf_counter() - t0) * 1000)))
    out.append(check_morphism(family.morphism, "iia.morphism"))
    return out


def verify_iib_tower(family: Optional[CocycleFamily] = None) -> list[ReportEntry]:
    family = family or iib_cocycles()
    out = _tower_entries("iib", family)
    out.append(check_morphism(family.morphism, "iib.morphism"))
    return out


def verify_m2m5(blocks: bool = False, threads: int = 1) -> list[ReportEntry]:
    """Full expansion of d μ_M2 = 0 and d μ_M5 + ½ μ_M2 ∧ μ_M2 = 0."""
    t0 = time.perf_counter()
    fam, cal = calibrated_m_branes()
    ms = int((time.perf_counter() - t0) * 1000)
    changed = {k: v.to_text() for k, v in cal.items() if v != ONE}
    out = [ReportEntry("mbranes.calibration", "pass",
                       "displayed prefactors satisfy the relations" if not changed else
                       f"CALIBRATED phases {changed}: with the displayed mu_M5 the engine finds "
                       f"d mu_M5 = +1/2 mu_M2 mu_M2", None, ms)]
    dm2 = fam.d("M2")
    out.append(entry("mbranes.m2_closed", not dm2, "d mu_M2 = 0", dm2.first_term()))
    diff = relation_defect(fam, "M5", -HALF, ("M2", "M2"))
    out.append(entry("mbranes.fierz", not diff,
                     f"d mu_M5 + 1/2 mu_M2 mu_M2 = 0 ({len(fam.d('M5'))} terms per side)", diff.first_term()))
    if blocks:
        out.append(verify_fierz_blocks(threads=threads, m5_phase=cal.get("M5", ONE), m2_phase=cal.get("M2", ONE)))
    return out


# --- Fierz identity by index blocks ------------------------------------------------

def _sym_form(M) -> dict:
    """Symmetric quadratic form of a matrix: {(α, β) with α <= β: coefficient}."""
    out: dict = {}
    for i, j, v in M.nonzeros():
        key = (i, j) if i <= j else (j, i)
        old = out.get(key)
        out[key] = v if old is None else old + v
    return {k: v for k, v in out.items() if v}


def _quartic(q1: dict, q2: dict, c: GaussianRational, acc: dict) -> None:
    for (a, b), u in q1.items():
        for (x, y), v in q2.items():
            key = tuple(sorted((a, b, x, y)))
            w = u * v * c
            old = acc.get(key)
            acc[key] = w if old is None else old + w


def fierz_block(A: tuple, m5_phase=ONE, m2_phase=ONE, model: Optional[CliffordModel] = None) -> dict:
    """Coefficient of e^{A} (|A| = 4, ascending) in d μ_M5 + ½ μ_M2 ∧ μ_M2, as a quartic in ψ."""
    model = model or standard_model()
    m5_phase = GaussianRational.coerce(m5_phase)
    m2sq = GaussianRational.coerce(m2_phase) ** 2
    C = model.C
    acc: dict = {}
    # d μ_M5: μ_M5 = Σ_B Q_B e^B, d e^b = Q^b moves to the front past the e's before it
    for b in range(11):
        if b in A:
            continue
        B = tuple(sorted(A + (b,)))
        pos = B.index(b)
        QB = _sym_form(C @ antisymmetrized_product(model, B))
        Qb = _sym_form(C @ model.gamma_upper(b))
        _quartic(QB, Qb, m5_phase * (-1 if pos % 2 else 1), acc)
    # ½ μ_M2 ∧ μ_M2 with μ_M2 = i Σ_P Q_P e^P: coefficient ½ · i² · sign(P, P')
    for P in itertools.combinations(A, 2):
        Pc = tuple(a for a in A if a not in P)
        sign = _shuffle_sign(P + Pc)
        QP = _sym_form(C @ antisymmetrized_product(model, P))
        QPc = _sym_form(C @ antisymmetrized_product(model, Pc))
        _quartic(QP, QPc, HALF * I * I * m2sq * sign, acc)
    return {k: v for k, v in acc.items() if v}


def _shuffle_sign(seq) -> int:
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def _block_worker(args):
    A, p5, p2 = args
    return A, fierz_block(A, GaussianRational(*p5), GaussianRational(*p2))


def verify_fierz_blocks(threads: int = 1, m5_phase=ONE, m2_phase=ONE) -> ReportEntry:
    t0 = time.perf_counter()
    sets = list(itertools.combinations(range(11), 4))
    p5 = GaussianRational.coerce(m5_phase).as_fractions()
    p2 = GaussianRational.coerce(m2_phase).as_fractions()
    jobs = [(A, p5, p2) for A in sets]
    failures = []
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(threads) as ex:
            results = list(ex.map(_block_worker, jobs, chunksize=8))
    else:
        results = [_block_worker(j) for j in jobs]
    for A, res in sorted(results):
        if res:
            failures.append((A, res))
    ms = int((time.perf_counter() - t0) * 1000)
    if not failures:
        return ReportEntry("mbranes.fierz_blocks", "pass", f"all {len(sets)} index blocks vanish", None, ms)
    A, res = failures[0]
    k = min(res)
    return ReportEntry("mbranes.fierz_blocks", "fail", f"{len(failures)} of {len(sets)} blocks nonzero",
                       f"block {A}: psi{k} coefficient {res[k].to_text()}", ms)


# --- phase calibration --------------------------------------------------------

UNITS = (ONE, -ONE, I, -I)


def calibrate_phases(family: CocycleFamily, relations: Optional[Sequence] = None) -> dict:
    """Per-element phases in {±1, ±i} making every relation hold.

    A relation d μ_X = c Π μ_f holds after rephasing iff λ_X dμ_X = c Πλ_f Πμ_f,
    so for each relation we first find the units κ with dμ_X = κ c Πμ_f and then
    search assignments.  Ties between equally small changes prefer real phases, then
    elements higher up the tower.
    """
    relations = list(relations if relations is not None else RELATIONS[family.label])
    kappas = []
    for name, coef, factors in relations:
        lhs = family.d(name)
        if not factors:
            if lhs:
                raise NoCalibration(f"mu_{name} is not closed")
            continue
        rhs = family.product(tuple(factors)).scale(coef)
        ks = [u for u in UNITS if lhs == rhs.scale(u)]
        if not ks:
            raise NoCalibration(f"d mu_{name} is not a unit multiple of the expected product")
        kappas.append((name, tuple(factors), ks))
    names = []
    for n, _, fs in relations:
        for x in (*fs, n):
            if x not in names:
                names.append(x)
    pos = {n: k for k, n in enumerate(names)}
    rank = {u.to_text(): k for k, u in enumerate(UNITS)}
    best = None
    for combo in itertools.product(UNITS, repeat=len(names)):
        lam = dict(zip(names, combo))
        ok = True
        for name, factors, ks in kappas:
            rhs = ONE
            for f in factors:
                rhs = rhs * lam[f]
            if not any(lam[name] * k == rhs for k in ks):
                ok = False
                break
        if not ok:
            continue
        changed = [n for n in names if lam[n] != ONE]
        key = (len(changed), sum(rank[lam[n].to_text()] for n in names), sorted(-pos[n] for n in changed))
        if best is None or key < best[0]:
            best = (key, lam)
    if best is None:
        raise NoCalibration(f"no phase assignment satisfies the {family.label} relations")
    return best[1]


def is_identity_calibration(phases: Mapping) -> bool:
    return all(v == ONE for v in phases.values())


@lru_cache(maxsize=None)
def calibrated_m_branes() -> tuple:
    """(family with calibrated phases, calibration map) for the M2/M5 pair."""
    lit = m_brane_cocycles()
    cal = calibrate_phases(lit)
    fam = lit if is_identity_calibration(cal) else lit.rephased(cal)
    return fam, cal


def non_triviality_entries() -> list[ReportEntry]:
    from .superspace import c2_iia, c2_iib, c2_m, mink9
    out = []
    cases = [("c2M", iia10(), c2_m()), ("c2IIA", mink9(), c2_iia()), ("c2IIB", mink9(), c2_iib()),
             ("M2", m11(), _m_elements()["M2"]), ("F1IIA", iia10(), _iia_elements()["F1"])]
    for label, alg, x in cases:
        t0 = time.perf_counter()
        closed = not alg.d(x)
        pot = solve_exactness(alg, x)
        ms = int((time.perf_counter() - t0) * 1000)
        ok = closed and pot is None
        out.append(ReportEntry(f"nontrivial.{label}", "pass" if ok else "fail",
                               f"{label} closed={closed}, no potential in the full basis one degree below",
                               None if pot is None else pot.first_term().text(), ms))
    return out
