"""Composite midpoint rule and its error certificates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, UnsupportedBranch
from .funcspace import FunctionSpec, Interval, as_interval, as_order, check_hypothesis_H
from .ostrowski import integral_of
from .psibounds import Branch, as_holder, bound_parts, reflect_problem, tau_of


@dataclass(frozen=True)
class Partition:
    nodes: tuple

    def __post_init__(self):
        nodes = tuple(float(v) for v in self.nodes)
        if len(nodes) < 2:
            raise DomainError("a partition needs at least two nodes")
        if not all(math.isfinite(v) for v in nodes):
            raise DomainError("partition nodes must be finite")
        if any(not lo < hi for lo, hi in zip(nodes, nodes[1:])):
            raise DomainError("partition nodes must be strictly increasing")
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return len(self.nodes) - 1

    @property
    def interval(self) -> Interval:
        return Interval(self.nodes[0], self.nodes[-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(np.asarray(self.nodes))

    def subintervals(self) -> list:
        return [Interval(lo, hi) for lo, hi in zip(self.nodes, self.nodes[1:])]


def uniform_partition(iv, n: int) -> Partition:
    iv = as_interval(iv)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    nodes = [iv.a + (iv.b - iv.a) * i / n for i in range(n + 1)]
    nodes[-1] = iv.b
    return Partition(tuple(nodes))


def midpoint_sum(fn, d: Partition) -> float:
    """M(f, d) = sum (x_{i+1} - x_i) f((x_i + x_{i+1}) / 2)."""
    x = np.asarray(d.nodes)
    mids = 0.5 * (x[:-1] + x[1:])
    ev = fn.f if isinstance(fn, FunctionSpec) else fn
    vals = np.broadcast_to(np.asarray(ev(mids), dtype=float), mids.shape)
    return math.fsum(np.diff(x) * vals)


def classical_error_bound(K: float, d: Partition) -> float:
    """(K / 24) * sum h_i^3, valid when |f''| <= K."""
    if not K >= 0:
        raise DomainError(f"K must be nonnegative, got {K!r}")
    return K / 24.0 * math.fsum(d.widths**3)


@dataclass(frozen=True)
class IntervalTerm:
    interval: Interval
    tau: float
    branch: str
    psi: float
    term: float
    hypothesis_ok: bool
    reflected: bool = False

    @property
    def width(self) -> float:
        return self.interval.length


@dataclass(frozen=True)
class CompositeCertificate:
    """Midpoint-rule error certificate.

    ``term`` on each subinterval bounds the deviation |f(m_i) - mean_i|, so the
    local quadrature error is at most h_i * term.  ``weighted_bound`` is that
    sum.  ``bound`` is the plain sum of terms, which dominates it while every
    h_i <= 1; wider subintervals are weighted by h_i so it stays an upper bound.
    """

    approx: float
    bound: float
    true_error: Optional[float]
    per_interval: tuple
    integral: Optional[float] = None
    oracle_err: float = 0.0
    weighted_bound: float = math.nan

    @property
    def hypothesis_ok(self) -> bool:
        return all(t.hypothesis_ok for t in self.per_interval)

    def holds(self, tol: float = 1e-9) -> bool:
        return self.true_error is None or abs(self.true_error) <= self.bound + tol + self.oracle_err


def _certificate(fn, d, s, pq, reflect, with_truth, grid_n) -> CompositeCertificate:
    s = as_order(s).s
    pq = None if pq is None else as_holder(pq)
    power = 1.0 if pq is None else pq.q
    terms = []
    for sub in d.subintervals():
        g, flipped = fn, False
        if tau_of(fn, sub).branch is Branch.GREATER:
            if not reflect:
                raise UnsupportedBranch(
                    f"unsupported branch τ>1 on [{sub.a:g}, {sub.b:g}]; try --reflect"
                )
            g, _, _ = reflect_problem(fn, sub, sub.midpoint)
            flipped = True
        parts = bound_parts(g, sub, sub.midpoint, s, pq)
        hyp = check_hypothesis_H(g, sub, s, grid_n=grid_n, power=power)
        terms.append(
            IntervalTerm(sub, parts.tau.value, parts.tau.branch.value, parts.psi.value,
                         parts.rhs, hyp.passed, flipped)
        )
    approx = midpoint_sum(fn, d)
    bound = math.fsum(max(1.0, t.width) * t.term for t in terms)
    weighted = math.fsum(t.width * t.term for t in terms)
    integral = true_error = None
    err = 0.0
    if with_truth:
        integral, err = integral_of(fn, d.interval)
        true_error = integral - approx
    return CompositeCertificate(approx, bound, true_error, tuple(terms), integral, err, weighted)


def em_bound_prop1(fn: FunctionSpec, d: Partition, s, reflect: bool = False,
                   with_truth: bool = True, grid_n: int = 101) -> CompositeCertificate:
    """Sum over subintervals of the psi1 midpoint bound |f'(x_{i+1})| psi1(tau_i, s, [x_i, x_{i+1}]).

    For a partition with n = 1 this is the single-interval midpoint bound
    (scaled by b - a when the interval is longer than 1).
    """
    return _certificate(fn, d, s, None, reflect, with_truth, grid_n)


def em_bound_prop2(fn: FunctionSpec, d: Partition, s, pq, reflect: bool = False,
                   with_truth: bool = True, grid_n: int = 101) -> CompositeCertificate:
    """Hölder-form analogue of :func:`em_bound_prop1`."""
    return _certificate(fn, d, s, as_holder(pq), reflect, with_truth, grid_n)
