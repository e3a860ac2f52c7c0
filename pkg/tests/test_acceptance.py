"""End-to-end acceptance: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the terminal summary (see conftest.py),
so they show up under plain `pytest -v` without `-s`.
"""

import os
import random
import time

import pytest

from superfda import registry
from superfda.checks import GROUPS, Options, run_group

RESULTS: dict = {}
THREADS = max(1, os.cpu_count() or 1)
_GROUPS = {g.name: g for g in GROUPS}


def record(number: int, title: str, entries, extra_ok: bool = True, note: str = ""):
    failing = [e for e in entries if e.status == "fail"]
    ok = not failing and extra_ok and bool(entries)
    detail = note or (f"{len(entries)} checks" if ok else "; ".join(f"{e.id}: {e.detail}" for e in failing[:3]))
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    RESULTS[number] = line
    print(line)
    return ok, failing


def group(name: str, **opts):
    return run_group(_GROUPS[name], Options(threads=THREADS, **opts))


def test_01_clifford_foundation():
    from superfda.clifford import build_gamma_d9, check_clifford_relations, check_iib_relations, lift_to_d11
    t0 = time.perf_counter()
    model = lift_to_d11(build_gamma_d9())
    rel = check_clifford_relations(model)
    elapsed = time.perf_counter() - t0
    entries = [rel] + [e for e in check_iib_relations(model) if e.id == "clifford.iib.identity"]
    ok, failing = record(1, "66 anticommutators and the IIB identity", entries, elapsed < 1.0,
                         f"{elapsed * 1000:.0f} ms")
    assert ok, failing


def test_02_charge_conjugation():
    from superfda.clifford import build_gamma_d9, check_charge_conjugation, find_charge_conjugation, lift_to_d11
    model = lift_to_d11(build_gamma_d9())
    t0 = time.perf_counter()
    model.charge_conjugation = find_charge_conjugation(model)
    elapsed = time.perf_counter() - t0
    ok, failing = record(2, "unique C with C Gamma^a symmetric", [check_charge_conjugation(model)],
                         elapsed < 10.0, f"{elapsed:.2f} s")
    assert ok, failing


def test_03_m_brane_fierz():
    t0 = time.perf_counter()
    entries = group("mbranes")
    elapsed = time.perf_counter() - t0
    cal = next(e for e in entries if e.id == "mbranes.calibration")
    ok, failing = record(3, "d mu_M2 = 0 and d mu_M5 = -1/2 mu_M2^2 (blockwise too)", entries, True,
                         f"{elapsed:.0f} s on {THREADS} worker(s); {cal.detail.split(': with')[0]}")
    assert ok, failing


def test_04_iia_tower():
    entries = group("iia")
    d10 = next(e for e in entries if e.id == "iia.tower.D10")
    relations = [e for e in entries if e.id != "iia.tower.D10"]
    ok, failing = record(4, "IIA tower up to D8; D10 values computed and reported", relations, True,
                         d10.detail)
    assert ok, failing


def test_05_iib_tower():
    ok, failing = record(5, "IIB tower up to D9", group("iib"))
    assert ok, failing


def test_06_reduction_oxidation():
    ok, failing = record(6, "reduce/oxidize bijection and the unit factorization", group("reduce"))
    assert ok, failing


def test_07_t_duality_theorem():
    ok, failing = record(7, "slice identities, boxed D1-D9 and the global equality", group("tduality"))
    assert ok, failing


def test_08_correspondence():
    ok, failing = record(8, "Poincare form relation and nu, nu^-1", group("corr"))
    assert ok, failing


def test_09_hori():
    ok, failing = record(9, "Hori pull-push, closed form and exp form up to degree 12", group("hori", max_degree=12))
    assert ok, failing


def test_10_tfold():
    ok, failing = record(10, "T-fold pushouts equal the pulled-back string gerbes", group("tfold"))
    assert ok, failing


def test_11_f_theory():
    ok, failing = record(11, "F-theory diagram and the S-duality constant", group("ftheory"))
    assert ok, failing


def test_12_non_triviality():
    ok, failing = record(12, "no potentials for c2^M, c2^IIA, c2^IIB, mu_M2, mu_F1^IIA", group("nontrivial"))
    assert ok, failing


def _random_element(rng, alg, terms=3, length=3):
    """Random sum of monomials; with terms=1 the result is homogeneous."""
    from superfda.scalars import GaussianRational
    names = alg.names()
    x = alg.zero()
    for _ in range(rng.randint(1, terms)):
        t = alg.scalar(GaussianRational(rng.randint(-3, 3) or 1, rng.randint(-2, 2)))
        for _ in range(rng.randint(0, length)):
            t = t * alg.gen(rng.choice(names))
        x = x + t
    return x


def test_13_engine_properties():
    from superfda.brane_cocycles import CoefficientWindow, l_s4, twisted_ku
    from superfda.cyclification import cyclify
    from superfda.graded_algebra import DgaMorphism, compose, koszul_sign
    from superfda.scalars import GaussianRational
    from superfda.superspace import fiber_integrate, iia10, oxidize_element
    rng = random.Random(13)
    problems = []
    algebras = registry.all_algebras()
    for alg in algebras:
        for _ in range(5):
            x, y, z = (_random_element(rng, alg, 2, 2) for _ in range(3))
            if (x * y) * z != x * (y * z):
                problems.append(f"associativity in {alg.label}")
            if alg.d(alg.d(x)):
                problems.append(f"d^2 in {alg.label}")
            u, v = _random_element(rng, alg, 1), _random_element(rng, alg, 1)
            if u and v and u * v != (v * u).scale(koszul_sign(u.bidegree(), v.bidegree())):
                problems.append(f"graded commutativity in {alg.label}")
            if u and alg.d(u * y) != alg.d(u) * y + (u * alg.d(y)).scale((-1) ** u.bidegree().n):
                problems.append(f"Leibniz for d in {alg.label}")
    cyc = cyclify(twisted_ku(CoefficientWindow(0, 6)))
    for _ in range(30):
        u, y = _random_element(rng, cyc.result, 1), _random_element(rng, cyc.result)
        if u and cyc.s(u * y) != cyc.s(u) * y + (u * cyc.s(y)).scale((-1) ** u.bidegree().n):
            problems.append("Leibniz for s")
    iia = iia10()
    for _ in range(30):
        x = _random_element(rng, iia, 4, 3)
        sp = fiber_integrate(iia, "e9", x)
        if oxidize_element(iia, "e9", sp.restriction, sp.integral) != x:
            problems.append("fiber split")
    L = l_s4()
    g4, g7 = L.gens("g4", "g7")
    total = None
    for _ in range(10):
        c = GaussianRational(rng.randint(1, 5), rng.randint(-3, 3))
        m = DgaMorphism(L, L, {"g4": g4.scale(c), "g7": g7.scale(c * c)})
        total = m if total is None else compose(m, total)
        if not total.is_valid():
            problems.append("composition validity")
    from superfda.report import ReportEntry
    entries = [ReportEntry("engine.properties", "fail" if problems else "pass",
                           f"{len(algebras)} algebras sampled", ", ".join(sorted(set(problems))) or None)]
    ok, failing = record(13, "associativity, commutativity, Leibniz for d and s, d^2 = 0, fiber split, composition",
                         entries, True, f"seed 13, {len(algebras)} built-in algebras" if not problems else "")
    assert ok, problems


def test_14_format():
    from superfda.fda_format import parse_with_diagnostics
    from superfda.report import ReportEntry
    from test_fda_format import SEEDS, _mutate
    entries = group("format")
    bad = "algebra A { gen x : (1,even); gen y : (2,even); gen z : (3,even); d x = y; d y = z; }"
    doc, diags = parse_with_diagnostics(bad)
    located = doc is None and bool(diags) and diags[0].line == 1 and diags[0].column > 1
    entries.append(ReportEntry("format.rejects_d2", "pass" if located else "fail", "d^2 != 0 input rejected"))
    rng = random.Random(14)
    crashes = 0
    for k in range(10_000):
        try:
            doc, diags = parse_with_diagnostics(_mutate(rng, SEEDS[k % len(SEEDS)]))
            if doc is None and not diags:
                crashes += 1
        except Exception:  # any escape is a crash
            crashes += 1
    entries.append(ReportEntry("format.fuzz", "pass" if not crashes else "fail", f"{crashes} crashes in 10^4"))
    ok, failing = record(14, "format round trips, located d^2 diagnostics, 10^4 fuzzed inputs", entries)
    assert ok, failing
