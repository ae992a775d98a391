"""Verification suites behind ``ostrobound verify``.

Each suite returns a :class:`SweepReport`: bound-instance records plus named
scalar checks.  ``run_suite("default")`` runs all of them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NonPositiveValue, ZeroEndpointDerivative
from .funcspace import (
    FunctionSpec,
    Interval,
    catalog,
    check_hypothesis_H,
    check_slog_first,
    check_slog_second,
    derivative_residual,
    get_function,
)
from .integrate import integrate
from .ostrowski import lhs_deviation, mean_of, montgomery_rhs, verify_inequality
from .pdfapp import check_distribution, distributions, pdf_bound_thm3, pdf_bound_thm4
from .psibounds import (
    psi1_closed,
    psi1_integral,
    psi1_tau_one,
    psi2_closed,
    psi2_integral,
    psi2_tau_one,
)
from .quadrature import (
    classical_error_bound,
    em_bound_prop1,
    em_bound_prop2,
    midpoint_sum,
    uniform_partition,
)

ORACLE_TAUS = (0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999)
ORACLE_S = (0.25, 0.5, 0.75, 1.0)
ORACLE_Q = (1.5, 2.0, 3.0)
ORACLE_INTERVALS = (Interval(0.0, 1.0), Interval(2.0, 5.0))
SWEEP_S = (0.5, 1.0)
SWEEP_Q = (None, 2.0, 3.0)
N_X = 11


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""


@dataclass
class SweepReport:
    records: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(1 for r in self.records if r.hypothesis_ok and not r.holds)

    @property
    def summary(self) -> dict:
        return {
            "total": len(self.records),
            "hypothesis_ok": sum(1 for r in self.records if r.hypothesis_ok),
            "holds": sum(1 for r in self.records if r.holds),
            "violations": self.violations,
            "checks": len(self.checks),
            "checks_failed": sum(1 for c in self.checks if not c.passed),
        }

    @property
    def worst_margin(self) -> float:
        margins = [r.margin for r in self.records if r.hypothesis_ok]
        return min(margins) if margins else float("nan")

    @property
    def ok(self) -> bool:
        return self.violations == 0 and all(c.passed for c in self.checks)

    def extend(self, other: "SweepReport"):
        self.records.extend(other.records)
        self.checks.extend(other.checks)

    def sort(self):
        self.records.sort(key=lambda r: (r.fn_id, r.s, r.x, -1.0 if r.q is None else r.q))


def _le(name, value, limit, detail=""):
    return CheckResult(name, bool(value <= limit), float(value), float(limit), detail)


def _ge(name, value, limit, detail=""):
    return CheckResult(name, bool(value >= limit), float(value), float(limit), detail)


def _fns(fn_id: Optional[str]) -> list:
    return [get_function(fn_id)] if fn_id else catalog()


def x_grid(iv: Interval, n: int = N_X) -> list:
    return [iv.a + (iv.b - iv.a) * i / (n - 1) for i in range(n)]


def suite_catalog(fn_id=None, **_) -> SweepReport:
    rep = SweepReport()
    for fn in _fns(fn_id):
        rep.checks.append(_le(f"derivative[{fn.id}]", derivative_residual(fn), 1e-6))
        if fn.exact_integral is not None:
            iv = fn.default_interval
            exact = fn.exact_integral(iv.a, iv.b)
            oracle = integrate(fn.f, iv.a, iv.b, tol=1e-13).value
            rep.checks.append(_le(f"exact_integral[{fn.id}]", abs(exact - oracle) / max(abs(oracle), 1e-300), 1e-10))
    return rep


def suite_membership(fn_id=None, **_) -> SweepReport:
    rep = SweepReport()
    for fn in _fns(fn_id):
        iv = fn.default_interval
        try:
            first = check_slog_first(fn, iv, 1.0, grid_n=11)
            second = check_slog_second(fn, iv, 1.0, grid_n=11)
        except NonPositiveValue:
            continue
        rep.checks.append(CheckResult(f"s=1 senses agree[{fn.id}]", first.passed == second.passed,
                                      float(first.passed == second.passed), 1.0))
        for tag in fn.claimed_classes:
            if tag.kind == "HypothesisH":
                r = check_hypothesis_H(fn, iv, tag.s)
                rep.checks.append(_ge(f"claim {tag}[{fn.id}]", r.worst_margin, -r.tol))
            elif tag.kind in ("SLogSecond", "LogConvex"):
                r = check_slog_second(fn, iv, tag.s or 1.0, grid_n=11)
                rep.checks.append(_ge(f"claim {tag}[{fn.id}]", r.worst_margin, -r.tol))
            elif tag.kind == "SLogFirst":
                r = check_slog_first(fn, iv, tag.s, grid_n=11)
                rep.checks.append(_ge(f"claim {tag}[{fn.id}]", r.worst_margin, -r.tol))
        if fn.id.startswith("eq_s"):
            s = float(fn.id[4:])
            r = check_hypothesis_H(fn, iv, s)
            rep.checks.append(_le(f"equality-family margin[{fn.id}]", abs(r.worst_margin), 1e-12))
    if fn_id is None:
        r = check_hypothesis_H(get_function("exp1"), (0.0, 1.0), 0.5)
        lhs, rhs = r.witness_values
        rep.checks.append(_ge("H(0.5) rejects exp1 (LHS - RHS at witness)", lhs - rhs, 0.46,
                              f"t={r.witness[0]:.4g}"))
    return rep


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def suite_psi_oracle(grid: Optional[int] = None, **_) -> SweepReport:
    rep = SweepReport()
    taus = ORACLE_TAUS if grid is None else tuple(np.geomspace(0.01, 0.999, int(grid)))
    worst1 = worst2 = 0.0
    min_value = math.inf
    for tau, s, iv in itertools.product(taus, ORACLE_S, ORACLE_INTERVALS):
        for x in x_grid(iv, 5):
            c1, i1 = psi1_closed(tau, s, iv, x).value, psi1_integral(tau, s, iv, x).value
            worst1 = max(worst1, _rel(c1, i1))
            min_value = min(min_value, c1, i1)
            for q in ORACLE_Q:
                c2, i2 = psi2_closed(tau, s, q, iv, x).value, psi2_integral(tau, s, q, iv, x).value
                worst2 = max(worst2, _rel(c2, i2))
                min_value = min(min_value, c2, i2)
    rep.checks.append(_le("psi1 closed vs integral (relative)", worst1, 1e-10))
    rep.checks.append(_le("psi2 closed vs integral (relative)", worst2, 1e-10))
    rep.checks.append(_ge("psi nonnegative", min_value, 0.0))

    exact = 0.0
    for iv in ORACLE_INTERVALS:
        a, b = iv.a, iv.b
        for x in x_grid(iv, 5):
            for s in ORACLE_S:
                exact = max(exact, abs(psi1_closed(1.0, s, iv, x).value - ((a - x) ** 2 + (b - x) ** 2) / (2 * (b - a))))
                exact = max(exact, abs(psi1_integral(1.0, s, iv, x).value - ((a - x) ** 2 + (b - x) ** 2) / (2 * (b - a))))
                for q in ORACLE_Q:
                    exact = max(exact, abs(psi2_closed(1.0, s, q, iv, x).value - ((b - x) ** 2 + (x - a) ** 2) / (b - a)))
                    exact = max(exact, abs(psi2_integral(1.0, s, q, iv, x).value - ((b - x) ** 2 + (x - a) ** 2) / (b - a)))
    rep.checks.append(_le("tau=1 branch exactness", exact, 1e-14))

    for s, x in CONTINUITY_CASES:
        iv = Interval(0.0, 1.0)
        d1 = [abs(psi1_closed(1 - 10.0**-k, s, iv, x).value - psi1_tau_one(iv, x)) for k in range(4, 9)]
        d2 = [abs(psi2_closed(1 - 10.0**-k, s, 2.0, iv, x).value - psi2_tau_one(iv, x)) for k in range(4, 9)]
        mono = all(u > v for u, v in zip(d1, d1[1:])) and all(u > v for u, v in zip(d2, d2[1:]))
        rep.checks.append(CheckResult(f"continuity monotone (s={s}, x={x})", mono, float(mono), 1.0))
        rep.checks.append(_le(f"continuity at 1-1e-8 (s={s}, x={x})", max(d1[-1], d2[-1]), 1e-6))

    trans = homog = 0.0
    mono_ok = True
    for tau, s in itertools.product((0.05, 0.4, 0.9), (0.25, 1.0)):
        base = Interval(0.0, 1.0)
        for x in x_grid(base, 5):
            p1 = psi1_closed(tau, s, base, x).value
            p2 = psi2_closed(tau, s, 2.0, base, x).value
            for h in (-3.0, 7.5):
                sh = Interval(h, 1.0 + h)
                trans = max(trans, abs(psi1_closed(tau, s, sh, x + h).value - p1),
                            abs(psi2_closed(tau, s, 2.0, sh, x + h).value - p2))
            for lam in (0.1, 3.0):
                sc = Interval(0.0, lam)
                homog = max(homog, _rel(psi1_closed(tau, s, sc, lam * x).value, lam * p1),
                            _rel(psi2_closed(tau, s, 2.0, sc, lam * x).value, lam * p2))
    for s, x in itertools.product((0.25, 1.0), (0.0, 0.3, 1.0)):
        vals = [psi1_integral(t, s, (0.0, 1.0), x).value for t in np.linspace(0.05, 1.0, 12)]
        mono_ok &= all(u <= v * (1 + 1e-13) for u, v in zip(vals, vals[1:]))
    rep.checks.append(_le("translation invariance", trans, 1e-12))
    rep.checks.append(_le("homogeneity", homog, 1e-12))
    rep.checks.append(CheckResult("psi1 nondecreasing in tau", mono_ok, float(mono_ok), 1.0))
    return rep


CONTINUITY_CASES = ((0.25, 0.0), (0.5, 0.3), (0.75, 0.5), (1.0, 0.8), (0.5, 1.0))


def theorem_records(fn: FunctionSpec, s_values=SWEEP_S, q_values=SWEEP_Q, n_x=N_X, tol=1e-9) -> list:
    iv = fn.default_interval
    out = []
    for s, q, x in itertools.product(s_values, q_values, x_grid(iv, n_x)):
        out.append(verify_inequality(fn, iv, x, s, q, tol=tol, reflect=True))
    return out


def suite_theorems(fn_id=None, tol=1e-9, **_) -> SweepReport:
    rep = SweepReport()
    for fn in _fns(fn_id):
        if fn.excluded:
            continue
        rep.records.extend(theorem_records(fn, tol=tol))
    rep.sort()
    rep.checks.append(_le("violations with hypothesis satisfied", rep.violations, 0))
    return rep


def suite_lemma1(fn_id=None, **_) -> SweepReport:
    rep = SweepReport()
    for fn in _fns(fn_id):
        iv = fn.default_interval
        mean, _err = mean_of(fn, iv)
        worst = 0.0
        for x in x_grid(iv):
            fx = float(np.asarray(fn.f(np.array([x])), dtype=float)[0])
            worst = max(worst, abs(montgomery_rhs(fn, iv, x) - (mean - fx)))
        rep.checks.append(_le(f"identity residual[{fn.id}]", worst, 1e-9))
        shifted = FunctionSpec(fn.id + "+3", lambda u, f=fn.f: np.asarray(f(u), dtype=float) + 3.0, fn.fprime)
        inv = max(abs(lhs_deviation(fn, iv, x)[0] - lhs_deviation(shifted, iv, x)[0]) for x in x_grid(iv, 3))
        rep.checks.append(_le(f"constant-shift invariance[{fn.id}]", inv, 1e-9))
    if fn_id in (None, "quad"):
        val = montgomery_rhs(get_function("quad"), (0.0, 1.0), 0.5)
        rep.checks.append(_le("quad at x=0.5 equals +1/12", abs(val - 1.0 / 12.0), 1e-12))
    return rep


def suite_quadrature(fn_id=None, tol=1e-9, **_) -> SweepReport:
    rep = SweepReport()
    worst = worst_weighted = math.inf
    count = 0
    for fn in _fns(fn_id):
        if fn.excluded:
            continue
        ivs = (fn.default_interval, Interval(fn.default_interval.a, fn.default_interval.a + 4.0))
        for iv, n, s, q in itertools.product(ivs, (1, 2, 4, 8, 16), (1.0,), (None, 2.0)):
            d = uniform_partition(iv, n)
            try:
                cert = (em_bound_prop1(fn, d, s, reflect=True) if q is None
                        else em_bound_prop2(fn, d, s, q, reflect=True))
            except ZeroEndpointDerivative:
                continue
            if not cert.hypothesis_ok:
                continue
            count += 1
            err = abs(cert.true_error) - tol - cert.oracle_err
            worst = min(worst, cert.bound - err)
            worst_weighted = min(worst_weighted, cert.weighted_bound - err)
    rep.checks.append(_ge(f"certificate soundness ({count} certificates)", worst, 0.0))
    rep.checks.append(_ge("width-weighted certificate soundness", worst_weighted, 0.0))

    if fn_id in (None, "quad"):
        quad = get_function("quad")
        d = uniform_partition((0.0, 1.0), 4)
        true = abs(1.0 / 3.0 - midpoint_sum(quad, d))
        rep.checks.append(_le("classical bound sharp for u^2", abs(classical_error_bound(2.0, d) - true), 1e-12))
    if fn_id in (None, "exp1"):
        exp1 = get_function("exp1")
        err = {n: abs((math.e - 1.0) - midpoint_sum(exp1, uniform_partition((0.0, 1.0), n))) for n in (4, 16)}
        rep.checks.append(_le("midpoint error(16) <= error(4)/10", err[16] / err[4], 0.1))
        d = uniform_partition((0.0, 1.0), 8)
        whole = em_bound_prop1(exp1, d, 1.0).bound
        parts = math.fsum(em_bound_prop1(exp1, uniform_partition(sub, 1), 1.0).bound for sub in d.subintervals())
        rep.checks.append(CheckResult("certificate additivity", whole == parts, abs(whole - parts), 0.0))
    return rep


def suite_pdf(tol=1e-9, **_) -> SweepReport:
    rep = SweepReport()
    for dist in distributions():
        res = check_distribution(dist)
        rep.checks.append(_ge(f"pdf >= 0[{dist.id}]", res["min_pdf"], 0.0))
        rep.checks.append(_le(f"normalisation[{dist.id}]", res["mass_error"], 1e-9))
        rep.checks.append(_le(f"cdf endpoints[{dist.id}]", max(res["cdf_a"], res["cdf_b_error"]), 1e-9))
        rep.checks.append(_ge(f"cdf nondecreasing[{dist.id}]", res["cdf_min_step"], 0.0))
        rep.checks.append(_le(f"E = b - int F[{dist.id}]", res["expectation_gap"], 1e-9))
        for s, q, x in itertools.product(SWEEP_S, (None, 2.0), x_grid(dist.support)):
            try:
                rec = pdf_bound_thm3(dist, x, s, tol=tol) if q is None else pdf_bound_thm4(dist, x, s, q, tol=tol)
            except ZeroEndpointDerivative:
                break
            rep.records.append(rec)
    rep.sort()
    rep.checks.append(_le("pdf violations with hypothesis satisfied", rep.violations, 0))
    return rep


SUITES: dict = {
    "catalog": suite_catalog,
    "membership": suite_membership,
    "psi-oracle": suite_psi_oracle,
    "theorems": suite_theorems,
    "lemma1": suite_lemma1,
    "quadrature": suite_quadrature,
    "pdf": suite_pdf,
}


def run_suite(name: str = "default", **kwargs) -> SweepReport:
    if name == "default":
        rep = SweepReport()
        for fun in SUITES.values():
            rep.extend(fun(**kwargs))
        return rep
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: default, {', '.join(SUITES)}")
    fun: Callable = SUITES[name]
    return fun(**kwargs)
