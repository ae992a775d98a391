"""Bounds on |Pr(X <= x) - (b - E X)/(b - a)| for densities on a finite support.

The deviation bound is applied to the CDF F, whose derivative is the
density, so the role of |f'| is played by the density itself: tau is
pdf(a)/pdf(b) and the hypothesis is checked on the density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, UnsupportedBranch, ZeroEndpointDensity
from .funcspace import FunctionSpec, Interval, as_interval, as_order, check_hypothesis_H, make_equality_family
from .integrate import integrate
from .ostrowski import VERIFY_TOL, VerificationRecord
from .psibounds import Branch, Tau, as_holder, psi1, psi2

ORACLE_TOL = 1e-12


@dataclass(frozen=True)
class DistributionSpec:
    id: str
    support: Interval
    pdf: Callable
    cdf: Callable
    expectation: float
    description: str = ""


class _OracleCdf:
    def __init__(self, pdf, a, norm):
        self.pdf, self.a, self.norm = pdf, a, norm

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape)
        for i, xi in np.ndenumerate(x):
            out[i] = integrate(self.pdf, self.a, float(xi), tol=ORACLE_TOL).value / self.norm
        return out if out.shape else float(out)


def _eval(ev, x) -> float:
    return float(np.asarray(ev(np.array([x], dtype=float)), dtype=float).reshape(-1)[0])


def _vec(ev, x):
    x = np.asarray(x, dtype=float)
    return np.broadcast_to(np.asarray(ev(x), dtype=float), x.shape)


def expectation_of(dist: DistributionSpec) -> float:
    """E X = b - int_a^b F(t) dt."""
    iv = dist.support
    res = integrate(lambda t: _vec(dist.cdf, t), iv.a, iv.b, tol=ORACLE_TOL)
    return iv.b - res.value


def first_moment(dist: DistributionSpec) -> float:
    iv = dist.support
    return integrate(lambda t: t * _vec(dist.pdf, t), iv.a, iv.b, tol=ORACLE_TOL).value


def make_distribution(id: str, support, pdf, cdf=None, description: str = "") -> DistributionSpec:
    """Build a distribution; the density is normalised and, without ``cdf``, integrated by the oracle."""
    iv = as_interval(support)
    norm = integrate(lambda t: _vec(pdf, t), iv.a, iv.b, tol=ORACLE_TOL).value
    if not norm > 0:
        raise DomainError(f"density {id!r} has nonpositive mass {norm!r}")
    if cdf is None:
        cdf = _OracleCdf(pdf, iv.a, norm)
        pdf = _Scaled(pdf, norm)
    elif abs(norm - 1.0) > 1e-9:
        raise DomainError(f"density {id!r} integrates to {norm!r}, not 1")
    partial = DistributionSpec(id, iv, pdf, cdf, float("nan"), description)
    return DistributionSpec(id, iv, pdf, cdf, expectation_of(partial), description)


class _Scaled:
    def __init__(self, fun, norm):
        self.fun, self.norm = fun, norm

    def __call__(self, x):
        return np.asarray(self.fun(x), dtype=float) / self.norm


def check_distribution(dist: DistributionSpec, grid_n: int = 101) -> dict:
    """Residuals of the structural invariants of a distribution."""
    iv = dist.support
    grid = np.linspace(iv.a, iv.b, grid_n)
    cdf = _vec(dist.cdf, grid)
    return {
        "min_pdf": float(np.min(_vec(dist.pdf, grid))),
        "mass_error": abs(integrate(lambda t: _vec(dist.pdf, t), iv.a, iv.b, tol=ORACLE_TOL).value - 1.0),
        "cdf_a": abs(float(cdf[0])),
        "cdf_b_error": abs(float(cdf[-1]) - 1.0),
        "cdf_min_step": float(np.min(np.diff(cdf))),
        "expectation_gap": abs(dist.expectation - first_moment(dist)),
    }


def truncated_exponential(lam: float, support=(0.0, 1.0), id: Optional[str] = None) -> DistributionSpec:
    """Density proportional to e^(lam t) on ``support`` with its exact CDF."""
    iv = as_interval(support)
    lam = float(lam)
    if lam == 0.0:
        raise DomainError("lam must be nonzero; use uniform() for a flat density")
    z = math.expm1(lam * iv.length) * math.exp(lam * iv.a) / lam

    def pdf(t):
        return np.exp(lam * np.asarray(t, dtype=float)) / z

    def cdf(t):
        t = np.clip(np.asarray(t, dtype=float), iv.a, iv.b)
        return np.expm1(lam * (t - iv.a)) * math.exp(lam * iv.a) / lam / z

    return make_distribution(id or f"texp({lam:g})", iv, pdf, cdf, f"density ∝ e^({lam:g} t)")


def uniform(support=(0.0, 1.0), id: str = "uniform") -> DistributionSpec:
    iv = as_interval(support)
    return make_distribution(
        id, iv,
        lambda t: np.full(np.shape(t), 1.0 / iv.length),
        lambda t: (np.clip(np.asarray(t, dtype=float), iv.a, iv.b) - iv.a) / iv.length,
        "flat density",
    )


@lru_cache(maxsize=1)
def _builtins() -> tuple:
    unit = Interval(0.0, 1.0)
    eq = make_equality_family(unit, 0.5, 0.5, 1.0)
    return (
        truncated_exponential(1.0, unit, id="texp1"),
        truncated_exponential(2.0, unit, id="texp2"),
        make_distribution("eqdens", unit, eq.fprime, description="normalised equality-family density, s=0.5"),
        uniform(unit),
        make_distribution(
            "tri", unit,
            lambda t: 2.0 * np.asarray(t, dtype=float),
            lambda t: np.clip(np.asarray(t, dtype=float), 0.0, 1.0) ** 2,
            "density 2t; vanishes at the left endpoint",
        ),
    )


def distributions() -> list:
    return list(_builtins())


def get_distribution(dist_id: str) -> DistributionSpec:
    for d in _builtins():
        if d.id == dist_id:
            return d
    known = ", ".join(d.id for d in _builtins())
    raise KeyError(f"unknown distribution id {dist_id!r}; known: {known}")


def cdf_as_function(dist: DistributionSpec) -> FunctionSpec:
    """The CDF packaged as a FunctionSpec whose derivative is the density."""
    return FunctionSpec(id=dist.id, f=dist.cdf, fprime=dist.pdf, default_interval=dist.support)


def _pdf_record(dist: DistributionSpec, x, s, pq, grid_n, tol) -> VerificationRecord:
    iv = dist.support
    x = iv.check_point(x)
    s = as_order(s).s
    pa, pb = abs(_eval(dist.pdf, iv.a)), abs(_eval(dist.pdf, iv.b))
    if not (pa > 0 and pb > 0):
        raise ZeroEndpointDensity(f"zero endpoint density for {dist.id!r}: τ undefined")
    tau = Tau.classify(pa / pb)
    if tau.branch is Branch.GREATER:
        raise UnsupportedBranch(f"unsupported branch τ>1 for {dist.id!r} (tau={tau.value:.6g})")
    power = 1.0 if pq is None else pq.q
    hyp = check_hypothesis_H(dist.pdf, iv, s, grid_n=grid_n, power=power)
    target = (iv.b - dist.expectation) / iv.length
    lhs = abs(_eval(dist.cdf, x) - target)
    if pq is None:
        psi = psi1(tau, s, iv, x)
        rhs = pb * psi.value
    else:
        psi = psi2(tau, s, pq, iv, x)
        rhs = pb * (pq.p + 1.0) ** (-1.0 / pq.p) * psi.value
    # cdf and expectation come from tol-1e-12 oracle integrals
    oracle_err = 2 * ORACLE_TOL + pb * psi.err_estimate
    margin = rhs - lhs
    return VerificationRecord(
        fn_id=dist.id, iv=iv, x=x, s=s, q=None if pq is None else pq.q,
        hypothesis_ok=hyp.passed, lhs=lhs, rhs=rhs, margin=margin,
        holds=margin >= -(tol + oracle_err), oracle_err=oracle_err,
        tau=tau.value, branch=tau.branch.value, psi=psi.value,
    )


def pdf_bound_thm3(dist: DistributionSpec, x, s, grid_n: int = 101, tol: float = VERIFY_TOL) -> VerificationRecord:
    """|F(x) - (b - E X)/(b - a)| <= pdf(b) * psi1(pdf(a)/pdf(b), s, [a, b], x)."""
    return _pdf_record(dist, x, s, None, grid_n, tol)


def pdf_bound_thm4(dist: DistributionSpec, x, s, pq, grid_n: int = 101, tol: float = VERIFY_TOL) -> VerificationRecord:
    """Hölder form: pdf(b) * (p+1)^(-1/p) * psi2(...)."""
    return _pdf_record(dist, x, s, as_holder(pq), grid_n, tol)
