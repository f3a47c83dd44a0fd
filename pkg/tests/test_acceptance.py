"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

from __future__ import annotations

import random
import time
import zlib
from fractions import Fraction

import pytest

from fuchsian_forge.errors import SingularDirection, UnitA, ZeroU
from fuchsian_forge.exact import UniPoly
from fuchsian_forge.generators import (
    mobius_transform_minpoly,
    odd_coeff_signature,
    odd_term_present,
)
from fuchsian_forge.matrices import check_group_relation, emit_matrices, emit_rational, word_trace_intervals
from fuchsian_forge.numberfield import certified_sign, embed, make_field, minimal_polynomial
from fuchsian_forge.quadric import ParamPoint, base_solution, quadric_residual, scaled_solution
from fuchsian_forge.realization import realize, verify_certificate
from fuchsian_forge.symbols import QuaternionSymbol
from fuchsian_forge.tracesym import (
    check_basic_traces,
    check_commutator_identities,
    check_theorem_2_3,
    word_trace,
)

from .conftest import FIELDS, REALIZATION_CASES, case_id, realized
from .test_generators import brute_mobius


@pytest.fixture
def gate(capsys):
    """Print a PASS/FAIL line past the capture, then assert."""

    def report(criterion: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")
        assert ok, detail

    return report


def test_criterion_1_theorem_suite(gate):
    start = time.perf_counter()
    table = check_theorem_2_3()
    elapsed = time.perf_counter() - start
    rows_ok = len(table.rows) == 14 and all(v.n_free() for _, v in table.rows)
    forms_ok = len(table.closed_form_words) == 8
    gate(
        1,
        rows_ok and forms_ok and elapsed <= 60,
        f"14 word traces free of sqrt(c^2-1) and M~, {len(table.closed_form_words)} closed-form matches, {elapsed:.2f}s <= 60s",
    )


def test_criterion_2_identities(gate):
    report = {**check_basic_traces(), **check_commutator_identities()}
    bad = [k for k, ok in report.items() if not ok]
    gate(2, not bad, f"{len(report)} exact identities ({', '.join(bad) or 'none failing'})")


@pytest.mark.parametrize("case", REALIZATION_CASES, ids=case_id)
def test_criterion_3_realization(gate, case):
    poly, idx, a, b = case
    K = make_field(poly, idx)
    start = time.perf_counter()
    cert = realize(K, QuaternionSymbol(K(a), K(b)))
    elapsed = time.perf_counter() - start
    report = verify_certificate(None, cert)
    n = K.degree
    degrees_ok = cert.minpoly_s.degree == n and cert.minpoly_s_squared.degree == n
    signs_ok = all(certified_sign(K, v - 1) == 1 for v in (cert.r, cert.s, cert.t, cert.c))
    failing = [c.name for c in report.checks if not c.passed]
    gate(
        3,
        report.passed and degrees_ok and signs_ok and elapsed <= 120,
        f"{case_id(case)} verified ({', '.join(failing) or 'all checks pass'}), {elapsed:.2f}s <= 120s",
    )


@pytest.mark.parametrize("name", list(FIELDS))
def test_criterion_4_quadric_oracle(gate, name):
    K = FIELDS[name]
    rng = random.Random(zlib.crc32(name.encode()))

    def elem(nonzero=False):
        while True:
            e = K.element([Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(K.degree)])
            if not (nonzero and e.is_zero()):
                return e

    valid = bad = 0
    while valid < 1000:
        a, b = elem(True), elem(True)
        m = ParamPoint(*(elem() for _ in range(5)))
        try:
            x, y, u, v, w = base_solution(a, b, m)
            sol = scaled_solution(a, b, m)
        except (SingularDirection, UnitA, ZeroU):
            continue
        valid += 1
        if not quadric_residual(a, b, x, y, u, v, w).is_zero():
            bad += 1
        elif not quadric_residual(a, b, sol.x, sol.y, sol.u, sol.v, sol.w).is_zero():
            bad += 1
        elif not (sol.z * sol.z - 4 - a * sol.u * sol.u).is_zero():
            bad += 1
    gate(4, bad == 0, f"{name}: {valid} valid parameter points, {bad} nonzero residuals")


def test_criterion_5_mobius_oracle(gate):
    rng = random.Random(5)
    bad = 0
    for _ in range(100):
        n = rng.randint(1, 6)
        cs = [Fraction(rng.randint(-30, 30), rng.randint(1, 7)) for _ in range(n)] + [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))]
        f = UniPoly(cs)
        t = mobius_transform_minpoly(f)
        xp, xm = UniPoly([1, 1]), UniPoly([-1, 1])
        double = UniPoly()
        for i in range(n + 1):
            double = double + (xp ** i) * (xm ** (n - i)) * t[i]
        if t != brute_mobius(f) or odd_coeff_signature(f) != t[n - 1] or double != f * (2 ** n):
            bad += 1
    gate(5, bad == 0, f"100 random polynomials of degree <= 6, {bad} mismatches")


def test_criterion_6_odd_term_implies_square_generates(gate):
    rng = random.Random(6)
    fields = list(FIELDS.values())
    checked = bad = 0
    for _ in range(200):
        K = rng.choice(fields)
        alpha = K.element([Fraction(rng.randint(-12, 12), rng.randint(1, 5)) for _ in range(K.degree)])
        m = minimal_polynomial(K, alpha)
        if odd_term_present(m):
            checked += 1
            if minimal_polynomial(K, alpha * alpha).degree != m.degree:
                bad += 1
    gate(6, bad == 0, f"200 random elements, {checked} with an odd term, {bad} counterexamples")


@pytest.mark.parametrize("case", REALIZATION_CASES, ids=case_id)
def test_criterion_7_numeric_emission(gate, case):
    K, cert = realized(case)
    table = check_theorem_2_3().as_dict()
    exact = {w: embed(K, f.evaluate(cert.r, cert.s, cert.t), 512) for w, f in table.items()}
    det_tol, rel_tol = Fraction(1, 1 << 100), Fraction(1, 1 << 64)
    problems = []
    worst_det, worst_rel = Fraction(0), Fraction(0)
    for M in (Fraction(1), Fraction(2)):
        mats = emit_matrices(K, cert, M=M, precision_bits=128)
        for m in mats:
            det = m.det()
            worst_det = max(worst_det, det.width)
            if not (det.contains(1) and det.width <= det_tol):
                problems.append(f"det M={M}")
        for w, iv in word_trace_intervals(mats).items():
            if not iv.contains(exact[w]):
                problems.append(f"tr {w} M={M}")
        rel = check_group_relation(mats, rel_tol)
        worst_rel = max(worst_rel, rel.residual)
        if not rel.passed:
            problems.append(f"relation M={M}")
    gate(
        7,
        not problems,
        f"{case_id(case)}: det width {float(worst_det):.1e} <= 2^-100, relation residual "
        f"{float(worst_rel):.1e} <= 2^-64, 14 traces enclosed for M=1,2 ({', '.join(problems) or 'no problems'})",
    )


def test_criterion_8_spot_values(gate):
    spot = {"sigma sigma'": 22, "rho rho'": 22, "rho sigma'": -8, "rho sigma sigma'": -16, "rho sigma rho'": 24}
    numeric = word_trace_intervals(emit_rational(2, 2, 2))
    bad = [
        w for w, v in spot.items()
        if word_trace(w).base.evaluate(2, 2, 2) != v or not numeric[w].contains(v)
    ]
    gate(8, not bad, f"spot values at r=s=t=2, symbolic and interval-matrix agree ({', '.join(bad) or 'all match'})")
