"""Psi kernels for the s-logarithmic Ostrowski bounds.

Two kernels are provided, each with an integral form (ground truth, evaluated
by the oracle integrator) and a closed form:

* ``psi1``: (b-a) * [int_0^c t tau^(st) dt + int_c^1 (1-t) tau^(st) dt]
* ``psi2``: (p+1)^(1/p) * (b-a) * [(int_0^c t^p)^(1/p) (int_0^c tau^(sqt))^(1/q)
  + (int_c^1 (1-t)^p)^(1/p) (int_c^1 tau^(sqt))^(1/q)]

with c = (b-x)/(b-a).  Neither kernel includes |f'(b)|; ``psi2`` also leaves
out the (p+1)^(-1/p) factor, which the full bounds apply.

The closed form of ``psi1`` is written through the entire functions
h(z) = int_0^1 u e^(zu) du and j(z) = int_0^1 (1-u) e^(zu) du so that it stays
accurate as tau -> 1 (the naive antiderivative divides by (s ln tau)^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    DomainError,
    NearSingular,
    NegativeKernel,
    UnsupportedBranch,
    ZeroDenominator,
    ZeroNumerator,
)
from .funcspace import FunctionSpec, Interval, as_interval, as_order
from .integrate import integrate

BRANCH_EPSILON = 1e-9
# 0 disables the NearSingular guard: the series-backed closed forms have no singularity.
CLOSED_FORM_EPSILON = 0.0
INTEGRAL_TOL = 1e-14


class Branch(str, Enum):
    LESS = "LessThanOne"
    ONE = "One"
    GREATER = "GreaterThanOne"


class Method(str, Enum):
    CLOSED = "ClosedForm"
    NUMERIC = "NumericIntegral"


@dataclass(frozen=True)
class Tau:
    value: float
    branch: Branch

    @classmethod
    def classify(cls, value: float, eps: float = BRANCH_EPSILON) -> "Tau":
        value = float(value)
        if not value > 0 or not math.isfinite(value):
            raise DomainError(f"tau must be a positive finite number, got {value!r}")
        if abs(value - 1.0) <= eps:
            return cls(value, Branch.ONE)
        return cls(value, Branch.LESS if value < 1.0 else Branch.GREATER)


def as_tau(tau) -> Tau:
    return tau if isinstance(tau, Tau) else Tau.classify(tau)


@dataclass(frozen=True)
class HolderPair:
    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (p > 1 and q > 1):
            raise DomainError(f"Hölder exponents must exceed 1, got p={p!r}, q={q!r}")
        if abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
            raise DomainError(f"1/p + 1/q must equal 1, got p={p!r}, q={q!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_q(cls, q: float) -> "HolderPair":
        q = float(q)
        if not q > 1:
            raise DomainError(f"q must exceed 1, got {q!r}")
        return cls(q / (q - 1.0), q)


def as_holder(pq) -> HolderPair:
    return pq if isinstance(pq, HolderPair) else HolderPair.from_q(pq)


@dataclass(frozen=True)
class PsiEvaluation:
    value: float
    branch: Branch
    method: Method
    err_estimate: float = 0.0

    def __post_init__(self):
        if not self.value >= 0:
            raise NegativeKernel(f"kernel evaluated to {self.value!r}")


def _geometry(iv: Interval, x) -> tuple:
    x = iv.check_point(x)
    return x, (iv.b - x) / iv.length, (x - iv.a) / iv.length


def _supported(tau: Tau):
    if tau.branch is Branch.GREATER:
        raise UnsupportedBranch(
            f"unsupported branch τ>1 (tau={tau.value!r}); reflect the problem first"
        )


def psi1_tau_one(iv, x) -> float:
    iv = as_interval(iv)
    x = iv.check_point(x)
    return ((iv.a - x) ** 2 + (iv.b - x) ** 2) / (2.0 * iv.length)


def psi2_tau_one(iv, x) -> float:
    iv = as_interval(iv)
    x = iv.check_point(x)
    return ((iv.b - x) ** 2 + (x - iv.a) ** 2) / iv.length


_SERIES_CUTOFF = 1.0
_N_TERMS = 30


def _h(z: float) -> float:
    """int_0^1 u e^(zu) du = sum z^n / (n! (n+2))."""
    if abs(z) < _SERIES_CUTOFF:
        total, term = 0.0, 1.0
        for n in range(_N_TERMS):
            total += term / (n + 2)
            term *= z / (n + 1)
        return total
    return (z * math.exp(z) - math.expm1(z)) / (z * z)


def _j(z: float) -> float:
    """int_0^1 (1-u) e^(zu) du = (e^z - 1 - z) / z^2 = sum z^n / (n+2)!."""
    if abs(z) < _SERIES_CUTOFF:
        total, term = 0.0, 0.5
        for n in range(_N_TERMS):
            total += term
            term *= z / (n + 3)
        return total
    return (math.expm1(z) - z) / (z * z)


def _near_singular(tau: Tau, eps: float):
    if tau.branch is Branch.LESS and abs(math.log(tau.value)) <= eps:
        raise NearSingular(f"|ln tau| = {abs(math.log(tau.value)):.3g} <= {eps:g}; use the integral form")


def psi1_closed(tau, s, iv, x, closed_form_epsilon: float = CLOSED_FORM_EPSILON) -> PsiEvaluation:
    tau, s, iv = as_tau(tau), as_order(s).s, as_interval(iv)
    _supported(tau)
    if tau.branch is Branch.ONE:
        return PsiEvaluation(psi1_tau_one(iv, x), tau.branch, Method.CLOSED)
    _near_singular(tau, closed_form_epsilon)
    _, c, d = _geometry(iv, x)
    k = s * math.log(tau.value)
    inner = c * c * _h(k * c) + d * d * math.exp(k * c) * _j(k * d)
    return PsiEvaluation(iv.length * inner, tau.branch, Method.CLOSED)


def _quad(fun, lo, hi):
    return integrate(fun, lo, hi, tol=INTEGRAL_TOL, rtol=INTEGRAL_TOL)


def psi1_integral(tau, s, iv, x) -> PsiEvaluation:
    tau, s, iv = as_tau(tau), as_order(s).s, as_interval(iv)
    _supported(tau)
    if tau.branch is Branch.ONE:
        return PsiEvaluation(psi1_tau_one(iv, x), tau.branch, Method.CLOSED)
    _, c, _ = _geometry(iv, x)
    k = s * math.log(tau.value)
    left = _quad(lambda t: t * np.exp(k * t), 0.0, c)
    right = _quad(lambda t: (1.0 - t) * np.exp(k * t), c, 1.0)
    return PsiEvaluation(
        iv.length * (left.value + right.value),
        tau.branch,
        Method.NUMERIC,
        iv.length * (left.err_estimate + right.err_estimate),
    )


def psi1(tau, s, iv, x) -> PsiEvaluation:
    """Closed form when it is usable, integral form otherwise."""
    try:
        return psi1_closed(tau, s, iv, x)
    except NearSingular:
        return psi1_integral(tau, s, iv, x)


def psi2_closed(tau, s, pq, iv, x, closed_form_epsilon: float = CLOSED_FORM_EPSILON) -> PsiEvaluation:
    tau, s, pq, iv = as_tau(tau), as_order(s).s, as_holder(pq), as_interval(iv)
    _supported(tau)
    if tau.branch is Branch.ONE:
        return PsiEvaluation(psi2_tau_one(iv, x), tau.branch, Method.CLOSED)
    _near_singular(tau, closed_form_epsilon)
    x, c, d = _geometry(iv, x)
    p, q = pq.p, pq.q
    big_k = s * q * math.log(tau.value)
    # (tau^(sqc) - 1) / (sq ln tau) and (tau^(sq) - tau^(sqc)) / (sq ln tau)
    head = math.expm1(big_k * c) / big_k
    tail = math.exp(big_k * c) * math.expm1(big_k * d) / big_k
    e = (p + 1.0) / p
    value = iv.length ** (-1.0 / p) * (
        (iv.b - x) ** e * head ** (1.0 / q) + (x - iv.a) ** e * tail ** (1.0 / q)
    )
    return PsiEvaluation(value, tau.branch, Method.CLOSED)


def psi2_integral(tau, s, pq, iv, x) -> PsiEvaluation:
    tau, s, pq, iv = as_tau(tau), as_order(s).s, as_holder(pq), as_interval(iv)
    _supported(tau)
    if tau.branch is Branch.ONE:
        return PsiEvaluation(psi2_tau_one(iv, x), tau.branch, Method.CLOSED)
    _, c, _ = _geometry(iv, x)
    p, q = pq.p, pq.q
    big_k = s * q * math.log(tau.value)
    pow_left = _quad(lambda t: np.abs(t) ** p, 0.0, c)
    pow_right = _quad(lambda t: np.clip(1.0 - t, 0.0, None) ** p, c, 1.0)
    exp_left = _quad(lambda t: np.exp(big_k * t), 0.0, c)
    exp_right = _quad(lambda t: np.exp(big_k * t), c, 1.0)

    def term(pw, ex):
        if pw.value == 0.0 or ex.value == 0.0:
            return 0.0, 0.0
        val = pw.value ** (1.0 / p) * ex.value ** (1.0 / q)
        rel = pw.err_estimate / (p * pw.value) + ex.err_estimate / (q * ex.value)
        return val, val * rel

    t1, e1 = term(pow_left, exp_left)
    t2, e2 = term(pow_right, exp_right)
    scale = (p + 1.0) ** (1.0 / p) * iv.length
    return PsiEvaluation(scale * (t1 + t2), tau.branch, Method.NUMERIC, scale * (e1 + e2))


def psi2(tau, s, pq, iv, x) -> PsiEvaluation:
    try:
        return psi2_closed(tau, s, pq, iv, x)
    except NearSingular:
        return psi2_integral(tau, s, pq, iv, x)


def _abs_deriv(fn: FunctionSpec, u: float) -> float:
    return abs(float(np.asarray(fn.fprime(np.array([u], dtype=float)), dtype=float).reshape(-1)[0]))


def tau_of(fn: FunctionSpec, iv) -> Tau:
    """Endpoint derivative ratio |f'(a)| / |f'(b)| with its branch."""
    iv = as_interval(iv)
    fa, fb = _abs_deriv(fn, iv.a), _abs_deriv(fn, iv.b)
    if fb == 0.0:
        raise ZeroDenominator(f"|f'(b)| = 0 at b={iv.b!r}: tau undefined")
    if fa == 0.0:
        raise ZeroNumerator(f"|f'(a)| = 0 at a={iv.a!r}: tau = 0 gives no bound")
    return Tau.classify(fa / fb)


@dataclass(frozen=True)
class BoundParts:
    """A full bound together with the pieces it was built from."""

    rhs: float
    tau: Tau
    psi: PsiEvaluation
    fprime_b: float
    holder: Optional[HolderPair] = None


def theorem1_parts(fn: FunctionSpec, iv, x, s) -> BoundParts:
    iv = as_interval(iv)
    tau = tau_of(fn, iv)
    psi = psi1(tau, s, iv, x)
    fb = _abs_deriv(fn, iv.b)
    return BoundParts(fb * psi.value, tau, psi, fb)


def theorem2_parts(fn: FunctionSpec, iv, x, s, pq) -> BoundParts:
    iv, pq = as_interval(iv), as_holder(pq)
    tau = tau_of(fn, iv)
    psi = psi2(tau, s, pq, iv, x)
    fb = _abs_deriv(fn, iv.b)
    return BoundParts(fb * (pq.p + 1.0) ** (-1.0 / pq.p) * psi.value, tau, psi, fb, pq)


def bound_parts(fn: FunctionSpec, iv, x, s, pq=None) -> BoundParts:
    if pq is None:
        return theorem1_parts(fn, iv, x, s)
    return theorem2_parts(fn, iv, x, s, pq)


def bound_theorem1(fn: FunctionSpec, iv, x, s) -> float:
    """|f'(b)| * psi1(tau, s, iv, x)."""
    return theorem1_parts(fn, iv, x, s).rhs


def bound_theorem2(fn: FunctionSpec, iv, x, s, pq) -> float:
    """|f'(b)| * (p+1)^(-1/p) * psi2(tau, s, pq, iv, x)."""
    return theorem2_parts(fn, iv, x, s, pq).rhs


def bound_corollary_M(M: float, iv, x, s, pq=None) -> float:
    """Bound with both tau and |f'(b)| replaced by a derivative cap M <= 1.

    ``pq=None`` selects the psi1 form, a Hölder pair (or q) the psi2 form.
    """
    M = float(M)
    if not M > 0:
        raise DomainError(f"M must be positive, got {M!r}")
    tau = Tau.classify(M)
    if tau.branch is Branch.GREATER:
        raise UnsupportedBranch(f"unsupported branch M>1 (M={M!r})")
    if pq is None:
        return M * psi1(tau, s, iv, x).value
    pq = as_holder(pq)
    return M * (pq.p + 1.0) ** (-1.0 / pq.p) * psi2(tau, s, pq, iv, x).value


def bound_midpoint(fn: FunctionSpec, iv, s, pq=None) -> float:
    iv = as_interval(iv)
    return bound_parts(fn, iv, iv.midpoint, s, pq).rhs


class _Reflected:
    def __init__(self, fn: FunctionSpec, a: float, b: float):
        self.fn, self.shift = fn, a + b

    def f(self, u):
        return self.fn.f(self.shift - np.asarray(u, dtype=float))

    def fprime(self, u):
        return -np.asarray(self.fn.fprime(self.shift - np.asarray(u, dtype=float)), dtype=float)

    def exact_integral(self, lo, hi):
        return self.fn.exact_integral(self.shift - hi, self.shift - lo)


def reflect_problem(fn: FunctionSpec, iv, x) -> tuple:
    """Substitute g(u) = f(a+b-u): same mean, x -> a+b-x, tau -> 1/tau.

    Claimed classes are dropped because the hypothesis has to be re-checked
    on the reflected derivative.
    """
    iv = as_interval(iv)
    x = iv.check_point(x)
    r = _Reflected(fn, iv.a, iv.b)
    g = FunctionSpec(
        id=f"{fn.id}~reflected",
        f=r.f,
        fprime=r.fprime,
        exact_integral=r.exact_integral if fn.exact_integral is not None else None,
        default_interval=iv,
        description=f"{fn.id} reflected about {iv.midpoint:g}",
    )
    return g, iv, (iv.a + iv.b) - x
