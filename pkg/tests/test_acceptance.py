"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Goldens marked "oracle" were recomputed with mpmath at
40 digits (see test_psibounds.py and test_quadrature.py) before freezing.
"""

import io
import itertools
import json
import math
import time
from contextlib import redirect_stderr, redirect_stdout

import numpy as np

from ostrobound import report
from ostrobound.cli import main
from ostrobound.errors import ZeroEndpointDerivative
from ostrobound.funcspace import Interval, catalog, check_hypothesis_H, get_function
from ostrobound.ostrowski import mean_of, montgomery_rhs, verify_inequality
from ostrobound.pdfapp import expectation_of, first_moment, get_distribution, pdf_bound_thm3, pdf_bound_thm4
from ostrobound.psibounds import (
    HolderPair, Tau, psi1, psi1_closed, psi1_integral, psi2, psi2_closed, psi2_integral,
)
from ostrobound.quadrature import classical_error_bound, em_bound_prop1, em_bound_prop2, uniform_partition
from ostrobound.sweeps import x_grid

UNIT = Interval(0.0, 1.0)


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_c1_psi_oracle_agreement(criterion):
    taus = (0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999)
    ss = (0.25, 0.5, 0.75, 1.0)
    qs = (1.5, 2.0, 3.0)
    worst1 = worst2 = 0.0
    t0 = time.perf_counter()
    for iv in (UNIT, Interval(2.0, 5.0)):
        h = iv.length
        xs = (iv.a, iv.a + 0.25 * h, iv.midpoint, iv.a + 0.75 * h, iv.b)
        for tau, s, x in itertools.product(taus, ss, xs):
            worst1 = max(worst1, _rel(psi1_closed(tau, s, iv, x).value, psi1_integral(tau, s, iv, x).value))
            for q in qs:
                pq = HolderPair.from_q(q)
                worst2 = max(worst2, _rel(psi2_closed(tau, s, pq, iv, x).value,
                                          psi2_integral(tau, s, pq, iv, x).value))
    elapsed = time.perf_counter() - t0
    ok = worst1 <= 1e-10 and worst2 <= 1e-10 and elapsed <= 10.0
    criterion("1 psi oracle agreement", ok,
              f"psi1 rel {worst1:.2e}, psi2 rel {worst2:.2e} (<= 1e-10), {elapsed:.2f}s (<= 10s)")


def test_c2_tau_one_exactness(criterion):
    worst = 0.0
    for iv in (UNIT, Interval(2.0, 5.0), Interval(-1.0, 3.5)):
        a, b = iv.a, iv.b
        for x in np.linspace(a, b, 9):
            x = float(x)
            e1 = ((a - x) ** 2 + (b - x) ** 2) / (2 * (b - a))
            e2 = ((b - x) ** 2 + (x - a) ** 2) / (b - a)
            for s in (0.25, 0.5, 1.0):
                worst = max(worst, abs(psi1(1.0, s, iv, x).value - e1))
                for q in (1.5, 2.0, 3.0):
                    worst = max(worst, abs(psi2(1.0, s, HolderPair.from_q(q), iv, x).value - e2))
    criterion("2 tau=1 branch exactness", worst <= 1e-14, f"max abs error {worst:.2e} (<= 1e-14)")


def test_c3_branch_continuity(criterion):
    cases = ((0.25, 0.0), (0.5, 0.3), (0.75, 0.5), (1.0, 0.8), (0.5, 1.0))
    tau = 1.0 - 1e-8
    assert Tau.classify(tau).branch.value == "LessThanOne"
    pq = HolderPair.from_q(2.0)
    worst = 0.0
    for s, x in cases:
        worst = max(worst, abs(psi1_closed(tau, s, UNIT, x).value - psi1(1.0, s, UNIT, x).value))
        worst = max(worst, abs(psi2_closed(tau, s, pq, UNIT, x).value - psi2(1.0, s, pq, UNIT, x).value))
    criterion("3 branch continuity at 1-1e-8", worst <= 1e-6, f"max jump {worst:.2e} (<= 1e-6)")


def test_c4_theorem_soundness(criterion):
    t0 = time.perf_counter()
    checked = violations = 0
    worst = math.inf
    for fn in catalog():
        iv = fn.default_interval
        for s in (0.5, 1.0):
            for pq in (None, HolderPair.from_q(2.0), HolderPair.from_q(3.0)):
                try:
                    first = verify_inequality(fn, iv, iv.midpoint, s, pq, reflect=True)
                except ZeroEndpointDerivative:
                    continue
                if not first.hypothesis_ok:
                    continue
                for x in x_grid(iv, 11):
                    rec = verify_inequality(fn, iv, x, s, pq, reflect=True)
                    checked += 1
                    worst = min(worst, rec.margin)
                    if not rec.margin >= -1e-9:
                        violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and checked > 0 and elapsed <= 60.0
    criterion("4 theorem soundness sweep", ok,
              f"{checked} records, {violations} violations, worst margin {worst:.3e}, {elapsed:.2f}s (<= 60s)")


def test_c5_lemma1_identity(criterion):
    worst = 0.0
    for fn in catalog():
        iv = fn.default_interval
        mean, _ = mean_of(fn, iv)
        for x in x_grid(iv, 11):
            fx = float(np.asarray(fn.f(np.array([x])))[0])
            worst = max(worst, abs(montgomery_rhs(fn, iv, x) - (mean - fx)))
    quad = abs(montgomery_rhs(get_function("quad"), UNIT, 0.5) - 1.0 / 12.0)
    ok = worst <= 1e-9 and quad <= 1e-12
    criterion("5 kernel identity (mean - f(x))", ok, f"max residual {worst:.2e} (<= 1e-9); u^2 at 0.5 off +1/12 by {quad:.1e}")


# oracle: mpmath at 40 digits
PROP1_N2_BOUND = 0.42734700651693847
MIDPOINT_ERR_N2 = 0.017769111808837001


def test_c6_composite_certificates(criterion):
    fn = get_function("exp1")
    worst = -math.inf
    for n in (1, 2, 4, 8, 16):
        d = uniform_partition(UNIT, n)
        for cert in (em_bound_prop1(fn, d, 1.0), em_bound_prop2(fn, d, 1.0, 2.0)):
            worst = max(worst, abs(cert.true_error) - cert.bound)
    c2 = em_bound_prop1(fn, uniform_partition(UNIT, 2), 1.0)
    golden = abs(c2.bound - PROP1_N2_BOUND) <= 1e-9 and abs(c2.true_error - MIDPOINT_ERR_N2) <= 1e-12
    ok = worst <= 1e-9 and golden
    criterion("6 composite certificates", ok,
              f"max(err - bound) {worst:.3f} (<= 1e-9); n=2 error {c2.true_error:.6f}, bound {c2.bound:.6f}")


def test_c7_classical_sharpness(criterion):
    d = uniform_partition(UNIT, 4)
    gap = abs(classical_error_bound(2.0, d) - 1.0 / 192.0)
    criterion("7 classical bound sharpness", gap <= 1e-12, f"|bound - 1/192| = {gap:.1e} (<= 1e-12)")


def test_c8_pdf_application(criterion):
    dist = get_distribution("texp1")
    r3 = pdf_bound_thm3(dist, 0.5, 1.0)
    r4 = pdf_bound_thm4(dist, 0.5, 1.0, 2.0)
    # density e^t / (e - 1): int_0^1 t e^t dt = 1, so E X = 1 / (e - 1)
    exact_e = 1.0 / (math.e - 1.0)
    gap = max(abs(expectation_of(dist) - first_moment(dist)), abs(expectation_of(dist) - exact_e))
    ok = (abs(r3.lhs - 0.040482) <= 1e-6 and abs(r3.rhs - 0.244918) <= 1e-6 and r3.holds
          and r3.hypothesis_ok and r4.holds and r4.hypothesis_ok and gap <= 1e-9)
    criterion("8 pdf application", ok,
              f"thm3 lhs {r3.lhs:.6f} <= rhs {r3.rhs:.6f}; thm4 rhs {r4.rhs:.6f}; E gap {gap:.1e}")


def test_c9_hypothesis_falsification(criterion):
    fn = get_function("exp1")
    rep = check_hypothesis_H(fn, UNIT, 0.5, grid_n=5)
    t, _, _ = rep.witness
    lhs, rhs = rep.witness_values
    fine = check_hypothesis_H(fn, UNIT, 0.5)
    ok = (not rep.passed and t == 0.25 and lhs - rhs >= 0.46 and not fine.passed)
    criterion("9 hypothesis falsification", ok,
              f"witness t={t:g}, LHS-RHS={lhs - rhs:.4f} (>= 0.46); fine grid worst {-fine.worst_margin:.4f}")


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def test_c10_cli_contract(criterion):
    tau_code, _, tau_err = _run(["bound", "thm1", "--fn", "expdec", "--a", "0", "--b", "1", "--x", "0.5", "--s", "1"])
    zero_code, _, _ = _run(["bound", "thm1", "--fn", "quad", "--a", "0", "--b", "1", "--x", "0.5", "--s", "1"])
    out_code, _, _ = _run(["bound", "thm1", "--fn", "exp1", "--a", "0", "--b", "1", "--x", "1.5", "--s", "1"])
    ok_code, text, _ = _run(["--json", "bound", "thm1", "--fn", "exp1", "--a", "0", "--b", "1", "--x", "0.5", "--s", "1"])
    roundtrip = report.dumps(json.loads(text)) == text
    ok = (tau_code == 2 and "unsupported branch τ>1; try --reflect" in tau_err and zero_code == 2
          and out_code == 1 and ok_code == 0 and roundtrip)
    criterion("10 cli contract", ok,
              f"tau>1 -> {tau_code}, zero f'(a) -> {zero_code}, x outside -> {out_code}, json round-trip {roundtrip}")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
