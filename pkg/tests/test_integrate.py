import math

import numpy as np
import pytest

from ostrobound.errors import DomainError, ToleranceNotReached
from ostrobound.funcspace import Interval
from ostrobound.integrate import BUDGET_ENV, DEFAULT_BUDGET, adaptive_integrate, eval_budget, integrate


@pytest.mark.parametrize("deg", [0, 1, 5, 12, 19])
def test_single_panel_when_gauss_is_exact(deg):
    res = integrate(lambda t: t**deg, 0.0, 1.0, tol=1e-13)
    assert res.value == pytest.approx(1.0 / (deg + 1), abs=1e-15)
    assert res.evaluations == 21


@pytest.mark.parametrize("deg", [20, 25, 31])
def test_kronrod_exact_through_degree_31(deg):
    res = integrate(lambda t: t**deg, 0.0, 1.0, tol=1e-13)
    assert res.value == pytest.approx(1.0 / (deg + 1), abs=1e-14)


def test_smooth_and_oscillatory():
    assert integrate(np.exp, 0.0, 1.0).value == pytest.approx(math.e - 1.0, abs=1e-15)
    assert integrate(np.sin, 0.0, 20.0 * math.pi, tol=1e-12).value == pytest.approx(0.0, abs=1e-11)


def test_endpoint_singularity_is_refined():
    res = integrate(np.sqrt, 0.0, 1.0, tol=1e-12)
    assert res.value == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert res.evaluations > 21


def test_orientation_and_empty_range():
    assert integrate(np.exp, 1.0, 0.0).value == pytest.approx(1.0 - math.e, abs=1e-15)
    assert integrate(np.exp, 0.5, 0.5).value == 0.0


def test_budget_exhaustion_raises():
    with pytest.raises(ToleranceNotReached):
        integrate(lambda t: np.sin(1.0 / np.maximum(t, 1e-300)), 0.0, 1.0, tol=1e-14, budget=2000)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_integrand_raises():
    with pytest.raises(ToleranceNotReached):
        integrate(lambda t: 1.0 / (t - 0.5) + 0.0 * t, 0.0, 0.5 + 1e-300)


def test_budget_env_override(monkeypatch):
    assert eval_budget() == DEFAULT_BUDGET
    monkeypatch.setenv(BUDGET_ENV, "500")
    assert eval_budget() == 500
    with pytest.raises(ToleranceNotReached):
        integrate(np.sqrt, 0.0, 1.0, tol=1e-14)


def test_adaptive_integrate_rejects_tiny_tol():
    assert adaptive_integrate(np.exp, Interval(0, 1)).value == pytest.approx(math.e - 1, abs=1e-15)
    with pytest.raises(DomainError):
        adaptive_integrate(np.exp, Interval(0, 1), tol=1e-16)
