import math

import mpmath as mp
import numpy as np
import pytest

from ostrobound.errors import DomainError, UnsupportedBranch
from ostrobound.funcspace import Interval, get_function
from ostrobound.psibounds import bound_midpoint, bound_theorem1
from ostrobound.quadrature import (
    Partition, classical_error_bound, em_bound_prop1, em_bound_prop2, midpoint_sum, uniform_partition,
)

UNIT = Interval(0.0, 1.0)
mp.mp.dps = 40


def mp_prop1_exp(n):
    """Sum of |f'(x_{i+1})| psi1 over a uniform partition for f = e^u on [0, 1] (s = 1)."""
    h = mp.mpf(1) / n
    total = mp.mpf(0)
    for i in range(n):
        a = i * h
        k = mp.log(mp.e ** a / mp.e ** (a + h))
        c = mp.mpf(1) / 2
        psi = h * (mp.quad(lambda t: t * mp.e ** (k * t), [0, c]) + mp.quad(lambda t: (1 - t) * mp.e ** (k * t), [c, 1]))
        total += mp.e ** (a + h) * psi
    return total


def mp_midpoint_error(n):
    h = mp.mpf(1) / n
    return (mp.e - 1) - h * sum(mp.e ** ((i + mp.mpf(1) / 2) * h) for i in range(n))


def test_partition_validation():
    with pytest.raises(DomainError):
        Partition((0.0,))
    with pytest.raises(DomainError):
        Partition((0.0, 0.5, 0.5, 1.0))
    with pytest.raises(DomainError):
        uniform_partition(UNIT, 0)
    d = uniform_partition(Interval(2, 5), 3)
    assert d.nodes == (2.0, 3.0, 4.0, 5.0) and d.n == 3 and d.interval == Interval(2, 5)
    np.testing.assert_allclose(d.widths, 1.0)


def test_midpoint_sum_quad():
    assert midpoint_sum(get_function("quad"), uniform_partition(UNIT, 4)) == 0.328125


def test_classical_bound_sharp_for_quadratic():
    d = uniform_partition(UNIT, 4)
    assert classical_error_bound(2.0, d) == pytest.approx(1.0 / 192.0, abs=1e-15)
    with pytest.raises(DomainError):
        classical_error_bound(-1.0, d)


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_prop1_matches_mpmath(n):
    cert = em_bound_prop1(get_function("exp1"), uniform_partition(UNIT, n), 1.0)
    assert cert.bound == pytest.approx(float(mp_prop1_exp(n)), rel=1e-13)
    assert cert.true_error == pytest.approx(float(mp_midpoint_error(n)), abs=1e-14)
    assert cert.hypothesis_ok and cert.holds()


def test_n2_goldens():
    cert = em_bound_prop1(get_function("exp1"), uniform_partition(UNIT, 2), 1.0)
    assert cert.bound == pytest.approx(0.42734700651694, abs=1e-13)
    assert cert.true_error == pytest.approx(0.017769111808837, abs=1e-14)
    assert cert.per_interval[0].psi == pytest.approx(0.0978581871396, abs=1e-12)


def test_n1_reduces_to_single_interval_bound():
    exp1 = get_function("exp1")
    cert = em_bound_prop1(exp1, uniform_partition(UNIT, 1), 1.0)
    assert cert.bound == bound_midpoint(exp1, UNIT, 1.0) == bound_theorem1(exp1, UNIT, 0.5, 1.0)


def test_prop2_sound_and_additive():
    exp1 = get_function("exp1")
    for n in (1, 2, 4, 8, 16):
        cert = em_bound_prop2(exp1, uniform_partition(UNIT, n), 1.0, 2.0)
        assert cert.holds() and cert.hypothesis_ok
        assert cert.bound == math.fsum(t.term for t in cert.per_interval)


def test_weighted_certificate_shrinks_with_refinement():
    exp1 = get_function("exp1")
    certs = [em_bound_prop1(exp1, uniform_partition(UNIT, n), 1.0) for n in (1, 2, 4, 8, 16)]
    weighted = [c.weighted_bound for c in certs]
    assert all(w2 < 0.6 * w1 for w1, w2 in zip(weighted, weighted[1:]))
    assert all(c.weighted_bound <= c.bound and abs(c.true_error) <= c.weighted_bound for c in certs)
    # the unweighted sum tends to (1/4) * int |f'| instead of 0
    assert certs[-1].bound == pytest.approx((math.e - 1.0) / 4.0, rel=0.01)


@pytest.mark.parametrize("length", [2.0, 4.0, 8.0])
def test_wide_subintervals_stay_sound(length):
    exp1 = get_function("exp1")
    iv = Interval(0.0, length)
    for n in (1, 2):
        cert = em_bound_prop1(exp1, uniform_partition(iv, n), 1.0)
        assert abs(cert.true_error) <= cert.weighted_bound <= cert.bound
        plain = math.fsum(t.term for t in cert.per_interval)
        if max(t.width for t in cert.per_interval) <= 1.0:
            assert cert.bound == plain


def test_reflect_for_decreasing_derivative():
    fn = get_function("expdec")
    d = uniform_partition(UNIT, 4)
    with pytest.raises(UnsupportedBranch):
        em_bound_prop1(fn, d, 1.0)
    cert = em_bound_prop1(fn, d, 1.0, reflect=True)
    assert all(t.reflected for t in cert.per_interval) and cert.holds()


def test_without_truth():
    cert = em_bound_prop1(get_function("exp1"), uniform_partition(UNIT, 2), 1.0, with_truth=False)
    assert cert.true_error is None and cert.integral is None and cert.holds()
