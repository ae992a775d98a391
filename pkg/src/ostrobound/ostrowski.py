"""Deviation of f(x) from its mean, the Montgomery identity, and bound checks."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import UnsupportedBranch
from .funcspace import FunctionSpec, Interval, as_interval, as_order, check_hypothesis_H
from .integrate import integrate
from .psibounds import Branch, as_holder, bound_parts, reflect_problem, tau_of

VERIFY_TOL = 1e-9
ORACLE_TOL = 1e-12


@dataclass(frozen=True)
class VerificationRecord:
    fn_id: str
    iv: Interval
    x: float
    s: float
    q: Optional[float]  # None for the psi1 bound
    hypothesis_ok: bool
    lhs: float
    rhs: float
    margin: float
    holds: bool
    oracle_err: float
    tau: float = float("nan")
    branch: str = ""
    psi: float = float("nan")
    reflected: bool = False

    @property
    def variant(self) -> str:
        return "thm1" if self.q is None else f"thm2(q={self.q:g})"


def _scalar(ev, x: float) -> float:
    return float(np.asarray(ev(np.array([x], dtype=float)), dtype=float).reshape(-1)[0])


def integral_of(fn: FunctionSpec, iv) -> tuple:
    """(integral of f over iv, error estimate); exact when the function carries an antiderivative."""
    return _integral_of(fn, as_interval(iv))


@lru_cache(maxsize=256)
def _integral_of(fn: FunctionSpec, iv: Interval) -> tuple:
    if fn.exact_integral is not None:
        return float(fn.exact_integral(iv.a, iv.b)), 0.0
    res = integrate(fn.f, iv.a, iv.b, tol=ORACLE_TOL)
    return res.value, res.err_estimate


def mean_of(fn: FunctionSpec, iv) -> tuple:
    iv = as_interval(iv)
    total, err = integral_of(fn, iv)
    return total / iv.length, err / iv.length


def lhs_deviation(fn: FunctionSpec, iv, x) -> tuple:
    """(|f(x) - mean of f over iv|, oracle error estimate)."""
    iv = as_interval(iv)
    x = iv.check_point(x)
    mean, err = mean_of(fn, iv)
    return abs(_scalar(fn.f, x) - mean), err


def montgomery_rhs(fn: FunctionSpec, iv, x) -> float:
    """(b-a) * int_0^1 p(t) f'(ta + (1-t)b) dt with p(t) = t on [0, c], t - 1 on (c, 1].

    Integration by parts shows this equals mean(f) - f(x).
    """
    iv = as_interval(iv)
    x = iv.check_point(x)
    a, b = iv.a, iv.b
    c = (b - x) / iv.length

    def fp(t):
        return np.asarray(fn.fprime(t * a + (1.0 - t) * b), dtype=float)

    left = integrate(lambda t: t * fp(t), 0.0, c, tol=ORACLE_TOL)
    right = integrate(lambda t: (t - 1.0) * fp(t), c, 1.0, tol=ORACLE_TOL)
    return iv.length * (left.value + right.value)


def verify_inequality(
    fn: FunctionSpec,
    iv,
    x,
    s,
    pq=None,
    grid_n: int = 101,
    tol: float = VERIFY_TOL,
    reflect: bool = False,
) -> VerificationRecord:
    """Evaluate one bound instance and record whether it holds.

    A failed hypothesis is recorded, not raised.  tau > 1 raises
    :class:`UnsupportedBranch` unless ``reflect`` is set, in which case the
    problem is mirrored about the midpoint first.
    """
    iv, s = as_interval(iv), as_order(s).s
    x = iv.check_point(x)
    pq = None if pq is None else as_holder(pq)
    fn_id, x_in = fn.id, x
    reflected = False
    if tau_of(fn, iv).branch is Branch.GREATER:
        if not reflect:
            raise UnsupportedBranch(f"unsupported branch τ>1 for {fn.id}; try --reflect")
        fn, iv, x = reflect_problem(fn, iv, x)
        reflected = True
    power = 1.0 if pq is None else pq.q
    hyp = check_hypothesis_H(fn, iv, s, grid_n=grid_n, power=power)
    lhs, err = lhs_deviation(fn, iv, x)
    parts = bound_parts(fn, iv, x, s, pq)
    oracle_err = err + parts.fprime_b * parts.psi.err_estimate
    margin = parts.rhs - lhs
    return VerificationRecord(
        fn_id=fn_id,
        iv=iv,
        x=x_in,
        s=s,
        q=None if pq is None else pq.q,
        hypothesis_ok=hyp.passed,
        lhs=lhs,
        rhs=parts.rhs,
        margin=margin,
        holds=margin >= -(tol + oracle_err),
        oracle_err=oracle_err,
        tau=parts.tau.value,
        branch=parts.tau.branch.value,
        psi=parts.psi.value,
        reflected=reflected,
    )
