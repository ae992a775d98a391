"""Test-function catalog and brute-force membership checkers.

The two definitional checkers (:func:`check_slog_first`,
:func:`check_slog_second`) act on ``fn.f``.  :func:`check_hypothesis_H` acts
on ``|fn.fprime|`` and tests the pointwise bound

    |f'(t a + (1 - t) b)| <= |f'(a)|**(t**s) * |f'(b)|**(1 - t**s)

which is what every bound in :mod:`ostrobound.psibounds` actually needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import (
    DomainError,
    EmptyLattice,
    InvalidTau,
    NonPositiveValue,
    ZeroEndpointDerivative,
)
from .integrate import integrate

Evaluator = Callable[[np.ndarray], np.ndarray]

MEMBERSHIP_ATOL = 1e-12


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got [{a!r}, {b!r}]")
        if not a < b:
            raise DomainError(f"interval needs a < b, got [{a!r}, {b!r}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def __contains__(self, x) -> bool:
        return self.a <= x <= self.b

    def check_point(self, x) -> float:
        x = float(x)
        if not (self.a <= x <= self.b):
            raise DomainError(f"x={x!r} lies outside [{self.a!r}, {self.b!r}]")
        return x


@dataclass(frozen=True)
class ConvexityOrder:
    s: float

    def __post_init__(self):
        s = float(self.s)
        if not 0.0 < s <= 1.0:
            raise DomainError(f"s must lie in (0, 1], got {s!r}")
        object.__setattr__(self, "s", s)

    def __float__(self) -> float:
        return self.s


def as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    a, b = iv
    return Interval(a, b)


def as_order(s) -> ConvexityOrder:
    if isinstance(s, ConvexityOrder):
        return s
    return ConvexityOrder(s)


@dataclass(frozen=True)
class ClassTag:
    """Claimed class membership.  ``HypothesisH`` refers to |f'|, the rest to f."""

    kind: str
    s: Optional[float] = None

    def __str__(self):
        return self.kind if self.s is None else f"{self.kind}({self.s:g})"


def LogConvex() -> ClassTag:
    return ClassTag("LogConvex")


def SLogFirst(s: float) -> ClassTag:
    return ClassTag("SLogFirst", float(s))


def SLogSecond(s: float) -> ClassTag:
    return ClassTag("SLogSecond", float(s))


def HypothesisH(s: float) -> ClassTag:
    return ClassTag("HypothesisH", float(s))


@dataclass(frozen=True)
class FunctionSpec:
    id: str
    f: Evaluator
    fprime: Evaluator
    exact_integral: Optional[Callable[[float, float], float]] = None
    claimed_classes: frozenset = frozenset()
    default_interval: Interval = Interval(0.0, 1.0)
    # Set when |f'| vanishes at an endpoint of the default interval.
    excluded: Optional[str] = None
    description: str = ""

    def __call__(self, u):
        return self.f(u)


@dataclass(frozen=True)
class MembershipReport:
    tag: ClassTag
    grid_n: int
    worst_margin: float
    witness: Optional[tuple]
    passed: bool
    tol: float
    skipped: int = 0
    # LHS and RHS at the witness point.
    witness_values: Optional[tuple] = None


def _values(fn, u) -> np.ndarray:
    ev = fn.f if isinstance(fn, FunctionSpec) else fn
    u = np.asarray(u, dtype=float)
    return np.broadcast_to(np.asarray(ev(u), dtype=float), u.shape)


def _require_positive(vals: np.ndarray, where: np.ndarray):
    bad = ~(vals > 0)
    if np.any(bad):
        u = float(np.asarray(where)[bad].flat[0])
        raise NonPositiveValue(f"function is not strictly positive at u={u!r}")


def _report(tag, grid_n, margins, lhs, rhs, coords, skipped=0) -> MembershipReport:
    k = int(np.argmin(margins))
    worst = float(margins.flat[k])
    tol = MEMBERSHIP_ATOL * max(1.0, float(np.max(np.abs(rhs))))
    witness = tuple(float(c.flat[k]) for c in coords)
    return MembershipReport(
        tag=tag,
        grid_n=grid_n,
        worst_margin=worst,
        witness=witness,
        passed=worst >= -tol,
        tol=tol,
        skipped=skipped,
        witness_values=(float(lhs.flat[k]), float(rhs.flat[k])),
    )


def _grid_check(grid_n):
    if int(grid_n) != grid_n or grid_n < 3:
        raise DomainError(f"grid_n must be an integer >= 3, got {grid_n!r}")
    return int(grid_n)


def check_slog_second(fn, iv, s, grid_n: int = 21) -> MembershipReport:
    """Brute-force f(tx + (1-t)y) <= f(x)**(t**s) * f(y)**((1-t)**s) on a grid_n**3 lattice."""
    iv, s, grid_n = as_interval(iv), as_order(s).s, _grid_check(grid_n)
    pts = np.linspace(iv.a, iv.b, grid_n)
    fx = _values(fn, pts)
    _require_positive(fx, pts)
    t = np.linspace(0.0, 1.0, grid_n)
    T, X, Y = np.meshgrid(t, pts, pts, indexing="ij")
    _, FX, FY = np.meshgrid(t, fx, fx, indexing="ij")
    inner = T * X + (1.0 - T) * Y
    lhs = _values(fn, inner)
    _require_positive(lhs, inner)
    rhs = FX ** (T**s) * FY ** ((1.0 - T) ** s)
    return _report(SLogSecond(s), grid_n, rhs - lhs, lhs, rhs, (T, X, Y))


def check_slog_first(fn, iv, s, grid_n: int = 21) -> MembershipReport:
    """Brute-force f(ax + by) <= f(x)**(a**s) * f(y)**(b**s) with a**s + b**s = 1.

    When a + b > 1 the combination can leave ``iv``; those lattice points are
    skipped and counted in ``report.skipped``.  Witness is ``(alpha, x, y)``.
    """
    iv, s, grid_n = as_interval(iv), as_order(s).s, _grid_check(grid_n)
    pts = np.linspace(iv.a, iv.b, grid_n)
    fx = _values(fn, pts)
    _require_positive(fx, pts)
    alpha = np.linspace(0.0, 1.0, grid_n)
    beta = np.clip(1.0 - alpha**s, 0.0, 1.0) ** (1.0 / s)
    A, X, Y = np.meshgrid(alpha, pts, pts, indexing="ij")
    B = np.broadcast_to(beta[:, None, None], A.shape)
    _, FX, FY = np.meshgrid(alpha, fx, fx, indexing="ij")
    inner = A * X + B * Y
    # round-off slack so that s = 1 reproduces the second-sense lattice exactly
    slack = 8 * np.finfo(float).eps * max(abs(iv.a), abs(iv.b), 1.0)
    inside = (inner >= iv.a - slack) & (inner <= iv.b + slack)
    skipped = int(inside.size - np.count_nonzero(inside))
    if not np.any(inside):
        raise EmptyLattice("every combination point falls outside the interval")
    inner = np.clip(inner[inside], iv.a, iv.b)
    lhs = _values(fn, inner)
    _require_positive(lhs, inner)
    rhs = FX[inside] ** (A[inside] ** s) * FY[inside] ** (B[inside] ** s)
    return _report(
        SLogFirst(s), grid_n, rhs - lhs, lhs, rhs, (A[inside], X[inside], Y[inside]), skipped
    )


def check_hypothesis_H(fn, iv, s, grid_n: int = 101, power: float = 1.0) -> MembershipReport:
    """Check |f'(ta+(1-t)b)|**q <= (|f'(a)|**q)**(t**s) * (|f'(b)|**q)**(1-t**s) for t on a grid.

    ``power`` is the exponent q (the Hölder-form bounds need the hypothesis on
    |f'|**q).  Witness is ``(t, u, None)`` with u = t*a + (1-t)*b.
    """
    iv, s, grid_n = as_interval(iv), as_order(s).s, _grid_check(grid_n)
    deriv = fn.fprime if isinstance(fn, FunctionSpec) else fn
    ends = np.abs(np.asarray(deriv(np.array([iv.a, iv.b])), dtype=float)) ** power
    ends = np.broadcast_to(ends, (2,))
    if not (ends[0] > 0 and ends[1] > 0):
        raise ZeroEndpointDerivative(
            f"|f'| vanishes at an endpoint of [{iv.a!r}, {iv.b!r}]: tau undefined"
        )
    t = np.linspace(0.0, 1.0, grid_n)
    u = t * iv.a + (1.0 - t) * iv.b
    lhs = np.abs(np.broadcast_to(np.asarray(deriv(u), dtype=float), u.shape)) ** power
    ts = t**s
    rhs = ends[0] ** ts * ends[1] ** (1.0 - ts)
    nones = np.full(t.shape, np.nan)
    report = _report(HypothesisH(s), grid_n, rhs - lhs, lhs, rhs, (t, u, nones))
    t0, u0, _ = report.witness
    return replace(report, witness=(t0, u0, None))


class _EqualityFamily:
    """Callable pieces of the equality-case family (picklable, vectorised)."""

    def __init__(self, a, b, s, tau0, scale):
        self.a, self.b, self.s, self.tau0, self.scale = a, b, s, tau0, scale
        self.log_tau0 = math.log(tau0)

    def g(self, u):
        u = np.asarray(u, dtype=float)
        r = (self.b - u) / (self.b - self.a)
        inside = self.scale * np.exp(self.log_tau0 * np.abs(r) ** self.s)
        # past b: point reflection about (b, g(b)), so f' stays centred at b
        return np.where(r >= 0.0, inside, 2.0 * self.scale - inside)

    def f(self, u):
        u = np.asarray(u, dtype=float)
        out = np.empty(u.shape)
        for i, ui in np.ndenumerate(u):
            out[i] = 1.0 + integrate(self.g, self.a, float(ui), tol=1e-14, rtol=1e-15).value
        return out if out.shape else float(out)


def make_equality_family(iv, s, tau0: float, scale: float = 1.0, id: Optional[str] = None) -> FunctionSpec:
    """Function whose derivative is scale * tau0**(((b-u)/(b-a))**s) on ``iv``.

    Its derivative meets the hypothesis-H bound with equality for every t, and
    |f'(a)| / |f'(b)| = tau0.  f itself is 1 + the oracle integral of f' from a.
    """
    iv, s = as_interval(iv), as_order(s).s
    if not 0.0 < tau0 < 1.0:
        raise InvalidTau(f"tau0 must lie in (0, 1), got {tau0!r}")
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    fam = _EqualityFamily(iv.a, iv.b, s, float(tau0), float(scale))
    return FunctionSpec(
        id=id or f"eqfam(s={s:g},tau0={tau0:g},scale={scale:g})",
        f=fam.f,
        fprime=fam.g,
        claimed_classes=frozenset({HypothesisH(s)}),
        default_interval=iv,
        description=f"f' = {scale:g}*{tau0:g}**(((b-u)/(b-a))**{s:g}) on [{iv.a:g}, {iv.b:g}]",
    )


def _exp_entry(id, lam, iv, claims, description):
    return FunctionSpec(
        id=id,
        f=lambda u: np.exp(lam * np.asarray(u, dtype=float)),
        fprime=lambda u: lam * np.exp(lam * np.asarray(u, dtype=float)),
        exact_integral=lambda a, b: (math.exp(lam * b) - math.exp(lam * a)) / lam,
        claimed_classes=frozenset(claims),
        default_interval=iv,
        description=description,
    )


def _all_s(tag):
    return {tag(s) for s in (0.25, 0.5, 0.75, 1.0)}


@lru_cache(maxsize=1)
def _catalog() -> tuple:
    unit = Interval(0.0, 1.0)
    entries = [
        _exp_entry(
            "exp1", 1.0, unit,
            {LogConvex(), SLogFirst(1), HypothesisH(1)} | _all_s(SLogSecond),
            "f = e^u",
        ),
        _exp_entry("exp2", 2.0, unit, {LogConvex(), HypothesisH(1)}, "f = e^(2u)"),
        _exp_entry("exphalf", 0.5, Interval(0.0, 2.0), {LogConvex(), HypothesisH(1)}, "f = e^(u/2)"),
        _exp_entry("expdec", -1.0, unit, {LogConvex()}, "f = e^(-u); tau > 1 on increasing intervals"),
        FunctionSpec(
            id="const",
            f=lambda u: np.ones_like(np.asarray(u, dtype=float)),
            fprime=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
            exact_integral=lambda a, b: b - a,
            claimed_classes=frozenset({LogConvex()} | _all_s(SLogFirst) | _all_s(SLogSecond)),
            default_interval=unit,
            excluded="f' vanishes identically",
            description="f = 1",
        ),
        FunctionSpec(
            id="linear",
            f=lambda u: np.asarray(u, dtype=float) + 1.0,
            fprime=lambda u: np.ones_like(np.asarray(u, dtype=float)),
            exact_integral=lambda a, b: 0.5 * (b * b - a * a) + (b - a),
            claimed_classes=frozenset(_all_s(HypothesisH)),
            default_interval=unit,
            description="f = u + 1; tau = 1",
        ),
        FunctionSpec(
            id="quad",
            f=lambda u: np.asarray(u, dtype=float) ** 2,
            fprime=lambda u: 2.0 * np.asarray(u, dtype=float),
            exact_integral=lambda a, b: (b**3 - a**3) / 3.0,
            default_interval=unit,
            excluded="f'(0) = 0",
            description="f = u^2",
        ),
        FunctionSpec(
            id="quad12",
            f=lambda u: np.asarray(u, dtype=float) ** 2,
            fprime=lambda u: 2.0 * np.asarray(u, dtype=float),
            exact_integral=lambda a, b: (b**3 - a**3) / 3.0,
            default_interval=Interval(1.0, 2.0),
            description="f = u^2 on [1, 2]; |f'| is log-concave, violates H(s)",
        ),
        FunctionSpec(
            id="sym",
            f=lambda u: (np.asarray(u, dtype=float) - 0.5) ** 2 + 1.0,
            fprime=lambda u: 2.0 * np.asarray(u, dtype=float) - 1.0,
            exact_integral=lambda a, b: ((b - 0.5) ** 3 - (a - 0.5) ** 3) / 3.0 + (b - a),
            claimed_classes=frozenset(_all_s(HypothesisH)),
            default_interval=unit,
            description="f = (u - 1/2)^2 + 1; f' changes sign, tau = 1",
        ),
    ]
    for s in (0.25, 0.5, 0.75, 1.0):
        entries.append(make_equality_family(unit, s, 0.5, 1.0, id=f"eq_s{s:g}"))
    return tuple(entries)


def catalog() -> list:
    """The built-in corpus of test functions (constructed once)."""
    return list(_catalog())


def get_function(fn_id: str) -> FunctionSpec:
    for fn in _catalog():
        if fn.id == fn_id:
            return fn
    known = ", ".join(fn.id for fn in _catalog())
    raise KeyError(f"unknown function id {fn_id!r}; known: {known}")


def derivative_residual(fn: FunctionSpec, iv=None, n: int = 101, h: float = 1e-6) -> float:
    """max |f'(u) - central difference| / (1 + |f'(u)|) over an n-point grid."""
    iv = fn.default_interval if iv is None else as_interval(iv)
    u = np.linspace(iv.a, iv.b, n)
    fd = (_values(fn, u + h) - _values(fn, u - h)) / (2 * h)
    fp = np.broadcast_to(np.asarray(fn.fprime(u), dtype=float), u.shape)
    return float(np.max(np.abs(fp - fd) / (1.0 + np.abs(fp))))

