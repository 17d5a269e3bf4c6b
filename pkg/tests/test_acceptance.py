"""Acceptance gate: one pass/fail line per criterion at stated tolerances.

Each test prints a single line of the form

    ACCEPTANCE <n> <label>: PASS|FAIL  worst=<residual> tol=<tolerance> t=<s>

summarizing the criterion's worst check, and then asserts it.  Runtime
budgets are asserted alongside the numerical tolerances.
"""

import time

import numpy as np

from tangentkit.report import Report
from tangentkit.suites import run_suite

SEED = 0


def _verdict(num, label, report: Report, elapsed, budget):
    # Exact checks carry tolerance 0; rank them by raw residual instead.
    worst = max(report.checks,
                key=lambda c: c.value / c.tolerance if c.tolerance else
                (float("inf") if c.value else c.value))
    ok = report.passed and elapsed < budget
    print(f"ACCEPTANCE {num} {label}: {'PASS' if ok else 'FAIL'}  "
          f"worst={worst.value:.3e} tol={worst.tolerance:.1e} "
          f"({worst.name}) t={elapsed:.1f}s/<{budget:.0f}s")
    assert report.passed, report.to_text()
    assert elapsed < budget, f"runtime {elapsed:.1f}s over budget {budget}s"


def _run(num, label, suite, budget, **kwargs):
    t0 = time.perf_counter()
    report = run_suite(suite, seed=SEED, **kwargs)
    _verdict(num, label, report, time.perf_counter() - t0, budget)
    return report


def test_acceptance_1_tangent_axioms():
    # Structural identities of the tangent functor (involution, braid,
    # coassociativity, vertical-lift kernel, naturality) at 1e-12.
    report = _run(1, "tangent-axioms", "tangent-axioms", 5.0)
    assert all(c.tolerance <= 1e-12 for c in report.checks)


def test_acceptance_2_brackets():
    # Two bracket constructions agree to 1e-10, match the matrix oracles
    # to 1e-9, and satisfy Jacobi to 1e-8, over 100 random pairs per group.
    report = _run(2, "brackets", "brackets", 30.0)
    assert all(c.tolerance <= 1e-8 for c in report.checks)


def test_acceptance_3_extensions():
    # Differentiating a central extension of the group gives the central
    # extension of the algebra by L(f), to 1e-8, for a bilinear cocycle,
    # a coboundary, and a quadrature-backed cocycle.
    report = _run(3, "extensions", "extensions", 30.0)
    assert all(c.tolerance <= 1e-8 for c in report.checks)


def test_acceptance_4_vanest():
    # Simplex integration: abelian closed form to 1e-12 and L(f) = omega
    # to 1e-10; on su(2), d2 f0 = omega/2 to 1e-8 and the cocycle identity
    # to 1e-7 over 200 random triples.
    _run(4, "vanest", "vanest", 60.0, samples=200)


def test_acceptance_5_periods():
    # Period of the symplectic form over the fundamental torus cycle is 1
    # to 1e-10; the pairing is bilinear exactly; the lattice-reduced
    # cocycle satisfies the identity modulo the period group.
    _run(5, "periods", "periods", 30.0)


def test_acceptance_6_quotients():
    # Structure constants computed at lattice-shifted representatives are
    # exactly invariant, and exact coset arithmetic is consistent.
    _run(6, "quotients", "quotients", 5.0)


def test_acceptance_7_examples():
    # Loop-algebra cocycle: closed form vs quadrature to 1e-9, cocycle
    # condition to 1e-10, extended Jacobi to 1e-9 over 100 triples; the
    # quotient example has dimension 7 with a 1-dimensional center.
    _run(7, "examples-ek-dl", "examples-ek-dl", 60.0)


def test_acceptance_8_determinism():
    # Two runs of every suite at the same seed emit byte-identical JSON
    # once wall-time fields are stripped.
    t0 = time.perf_counter()
    a = run_suite("all", seed=SEED).to_json(include_time=False)
    b = run_suite("all", seed=SEED).to_json(include_time=False)
    elapsed = time.perf_counter() - t0
    ok = a == b
    print(f"ACCEPTANCE 8 determinism: {'PASS' if ok else 'FAIL'}  "
          f"worst={0.0 if ok else 1.0:.3e} tol=0.0e+00 "
          f"(byte-identical reports) t={elapsed:.1f}s")
    assert ok, "reports differ between identically seeded runs"
