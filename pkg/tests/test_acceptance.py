"""The nine acceptance criteria, one test each.

Every test records one pass/fail line; the lines are printed in the terminal
summary of the pytest run.
"""

from __future__ import annotations

import random
import time

from conftest import ACCEPTANCE_LINES
from signumcalc import SYM, Dimension, World, parse_operator
from signumcalc import distributions as dc
from signumcalc.coherence import coherence_suite
from signumcalc.distributions import DistExpr, Lin, as_expr
from signumcalc.errors import DomainError
from signumcalc.identities import composite_suite, delta_rules, structural_suite, worked_examples
from signumcalc.operators import macros
from signumcalc.suite import identity_suite, quadrature_suite
from signumcalc.tables import verify_pair_tables


def record(n: int, name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES[n] = f"criterion {n} {'PASS' if ok else 'FAIL'}  {name}: {detail}"


def _ids(rows):
    return {r["id"] for r in rows}


def test_criterion_1_tables():
    start = time.perf_counter()
    rep = verify_pair_tables(SYM)
    seconds = time.perf_counter() - start
    failures = [r.label for r in rep.signum + rep.cross if not r.passed]
    ok = len(rep.signum) == 16 and len(rep.cross) == 6 and not failures and seconds < 1.0
    record(1, "pair tables", ok, f"{len(rep.signum)} + {len(rep.cross)} rows, {len(failures)} failures, {seconds:.3f} s (< 1 s)")
    assert ok, failures


REQUIRED_STRUCTURAL = {
    "d^2 = -Lap",
    "D^2 = -Z",
    "Lap = dr^2 + (m-1)(1/r)dr + (1/r^2)Lap*",
    "rad rad = -dr^2",
    "rad ang = -(1/r^2)w dw + (1/r)w dw dr",
    "ang rad = -(m-1)(1/r)dr - (1/r)dr w dw",
    "ang ang = (1/r^2)dw^2",
    "Lap* = (m-2)Gamma - Gamma^2",
    "dw^2 = Gamma^2 - (m-1)Gamma",
    "Z* = -Gamma^2 + m Gamma - (m-1)",
    "Z = dr^2 + (m-1)(1/r)dr + (1/r^2)Z*",
}


def test_criterion_2_structural_identities():
    rows = structural_suite(SYM)
    missing = REQUIRED_STRUCTURAL - _ids(rows)
    failures = [r["id"] for r in rows if not r["pass"]]
    ok = not missing and not failures
    record(2, "structural identities (symbolic m)", ok, f"{len(rows)} normal-form equalities, {len(failures)} failures")
    assert ok, (missing, failures)


REQUIRED_WORKED = {
    "d(-x) = m",
    "E x = x",
    "Gamma x = (m-1) x",
    "w d_r x = -1 + c1 delta",
    "(1/r) d_w x = 1 - m + c2 delta",
    "x: c1 + c2 = 0",
    "Lap x^3 = -2(m+2) x",
    "Lap* x^3 = -(m-1) x^3",
    "x^3: c2 + (m-1)c3 + c4 = 0, -(1/m)c1 + c5 = 0",
    "Lap r = (m-1)/r",
    "r: c2 + (m-1)c3 = 0",
}


def test_criterion_3_worked_examples():
    rows = worked_examples(SYM)
    missing = REQUIRED_WORKED - _ids(rows)
    failures = [r["id"] for r in rows if not r["pass"]]
    ok = not missing and not failures
    record(3, "worked examples (symbolic m)", ok, f"{len(rows)} examples, {len(failures)} failures")
    assert ok, (missing, failures)


REQUIRED_DELTA = {
    "Gamma delta = 0",
    "d_w delta = 0",
    "r delta = 0",
    "r d delta = -m w delta",
    "d_r delta = -w d delta",
    "(1/r) delta = -(1/m) d_r delta",
    "(1/x) delta = (1/m) d delta",
    "d_r^2 delta = (m+1)/2 Lap delta",
    "(1/r) d_r delta = -1/2 Lap delta",
    "D r = m w",
}


def test_criterion_4_delta_calculus():
    rows = delta_rules(SYM)
    missing = REQUIRED_DELTA - _ids(rows)
    failures = [r["id"] for r in rows if not r["pass"]]
    ok = not missing and not failures
    record(4, "delta calculus (exact)", ok, f"{len(rows)} rules, {len(failures)} failures")
    assert ok, (missing, failures)


def _random_catalog(rng: random.Random, world: World, dim) -> DistExpr:
    reg = {(rng.randint(0, 4), rng.randint(0, 1)): rng.choice([-3, -2, -1, 1, 2, 5]) for _ in range(rng.randint(1, 3))}
    org = {(world.proper_omega, n): Lin.const(rng.choice([-1, 1, 2])) for n in rng.sample(range(3), rng.randint(0, 2))}
    return DistExpr(world, dim, reg, org)


FLIPPING = ("r", "w", "dr", "dw")
PRESERVING = ("E", "Gamma", "Lap", "LapStar", "Dirac*Dirac")


def test_criterion_5_round_trips_and_worlds():
    rng = random.Random(20240)
    dims = [SYM, Dimension(2), Dimension(3), Dimension(4), Dimension(5)]
    count = 0
    failures = []
    for i in range(250):
        dim = dims[i % len(dims)]
        t = _random_catalog(rng, World.DIST, dim)
        u = _random_catalog(rng, World.SIGNUM, dim)
        count += 2
        if dc.wedge(dc.vee(t)) != t:
            failures.append(("vee-wedge", str(t)))
        if dc.vee(dc.wedge(u)) != u:
            failures.append(("wedge-vee", str(u)))
        for e in (t, u):
            if as_expr(dc.mul_omega(dc.mul_omega(e))) != -e:
                failures.append(("w w", str(e)))
            for name in FLIPPING:
                try:
                    out = as_expr(dc.apply_operator(macros(dim)[name], e))
                except DomainError:
                    continue
                if out.world is e.world:
                    failures.append(("flip", name, str(e)))
        for src in PRESERVING:
            try:
                out = as_expr(dc.apply_operator(parse_operator(src, dim), t))
            except DomainError:
                continue
            if out.world is not t.world:
                failures.append(("preserve", src, str(t)))
        for e in (t, u):
            for divide, multiply in ((dc.divide_by_x, dc.mul_x), (dc.divide_by_r, dc.mul_r)):
                try:
                    q = divide(e)
                except DomainError:
                    continue
                if as_expr(multiply(q.expr)) != e:
                    failures.append((divide.__name__, str(e)))
    ok = count >= 200 and not failures
    record(5, "round trips and world rules", ok, f"{count} random catalog expressions, {len(failures)} failures")
    assert ok, failures[:5]


def test_criterion_6_composite_actions():
    results = composite_suite(SYM)
    fails = [r.to_json() for r in results if r.status == "fail"]
    skips = [r for r in results if r.status == "skip"]
    schemes = {r.id for r in results}
    ok = len(schemes) == 10 and not fails
    record(
        6,
        "composite-action suite",
        ok,
        f"{len(schemes)} schemes x catalog = {len(results)} class checks, {len(fails)} failures, "
        f"{len(skips)} skipped (input outside the operator's domain)",
    )
    assert ok, fails[:3]


def test_criterion_7_numeric_grounding():
    start = time.perf_counter()
    rows = identity_suite(2, seed=0) + identity_suite(3, seed=0)
    seconds = time.perf_counter() - start
    failures = [r["id"] for r in rows if not r["pass"]]
    worst = max(r["max_rel_dev"] for r in rows)
    few = [r["id"] for r in rows if r["samples"] < 20]
    ok = not failures and not few and all(r["tolerance"] <= 1e-8 for r in rows) and seconds < 10.0
    record(7, "numeric grounding at m = 2, 3", ok, f"{len(rows)} identities, max rel dev {worst:.1e} (<= 1e-8), {seconds:.2f} s (< 10 s)")
    assert ok, (failures, few)


def test_criterion_8_quadrature():
    start = time.perf_counter()
    rows = quadrature_suite(3, seed=0, bumps=5)
    seconds = time.perf_counter() - start
    failures = [r["id"] for r in rows if not r["pass"]]
    adjoint_lap_r = [r for r in rows if r["id"].startswith("adjoint:Lap:r:")]
    means = [r for r in rows if r["id"].startswith("Sigma0[exp(-r^2)]")]
    second = [r for r in rows if r["id"].startswith("mean''(0)")]
    ok = (
        not failures
        and len(adjoint_lap_r) >= 5
        and all(r["tolerance"] <= 1e-6 for r in adjoint_lap_r)
        and all(r["tolerance"] <= 1e-10 for r in means)
        and all(r["tolerance"] <= 1e-4 for r in second)
        and seconds < 30.0
    )
    record(8, "quadrature suite at m = 3", ok, f"{len(rows)} checks, {len(failures)} failures, {seconds:.2f} s (< 30 s)")
    assert ok, failures


def test_criterion_9_symbolic_concrete_coherence():
    results = coherence_suite((2, 3, 4, 5))
    mismatches = [r.to_json() for r in results if r.status == "mismatch"]
    equal = sum(r.status == "equal" for r in results)
    undefined = len(results) - equal - len(mismatches)
    ok = not mismatches
    record(
        9,
        "symbolic/concrete coherence at m = 2..5",
        ok,
        f"{equal} byte-identical results, {undefined} cases undefined symbolically, {len(mismatches)} mismatches",
    )
    assert ok, mismatches[:3]
