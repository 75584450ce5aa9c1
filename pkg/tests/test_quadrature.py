import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cylcasimir.errors import QuadratureError
from cylcasimir.quadrature import NODES, WG7, WK15, adaptive_gk15, gk15_panels


def test_rule_weights_sum_to_interval_length():
    assert WK15.sum() == pytest.approx(2.0, abs=1e-15)
    assert WG7.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.allclose(NODES, -NODES[::-1])


@pytest.mark.parametrize("n", range(0, 23))
def test_kronrod_exact_for_polynomials(n):
    # K15 integrates degree <= 22 exactly on a single panel
    k, _ = gk15_panels(lambda x: x**n, np.array([-1.0]), np.array([1.0]))
    exact = 0.0 if n % 2 else 2.0 / (n + 1)
    assert k[0] == pytest.approx(exact, abs=1e-14)


def test_peaked_integrand_with_breakpoints():
    eps = 1e-6
    res = adaptive_gk15(lambda x: eps / (x**2 + eps**2), -1.0, 1.0, rel_tol=1e-12, breakpoints=[0.0])
    assert res == pytest.approx(2 * math.atan(1 / eps), rel=1e-11)
    assert res.error <= 1e-12 * abs(res) * 1.0001
    assert res.intervals >= 2


def test_endpoint_singularity():
    res = adaptive_gk15(lambda x: 1 / np.sqrt(x), 0.0, 1.0, rel_tol=1e-10)
    assert res == pytest.approx(2.0, rel=1e-9)


def test_reversed_limits_and_empty_interval():
    assert adaptive_gk15(np.exp, 1.0, 0.0) == pytest.approx(-(math.e - 1), rel=1e-13)
    assert adaptive_gk15(np.exp, 2.0, 2.0) == 0.0


def test_budget_exhaustion_raises():
    with pytest.raises(QuadratureError):
        adaptive_gk15(lambda x: np.sin(1 / x), 1e-9, 1.0, rel_tol=1e-14, max_intervals=50)


def test_nonfinite_integrand_raises():
    with pytest.raises(QuadratureError):
        adaptive_gk15(lambda x: np.full_like(x, np.nan), 0.0, 1.0)
    with pytest.raises(QuadratureError):
        adaptive_gk15(np.exp, 0.0, np.inf)


@given(st.floats(min_value=-5, max_value=5), st.floats(min_value=0.1, max_value=20))
@settings(max_examples=40)
def test_oscillatory_family(shift, k):
    res = adaptive_gk15(lambda x: np.cos(k * x + shift), 0.0, 3.0, rel_tol=1e-12, abs_tol=1e-14)
    assert res == pytest.approx((math.sin(3 * k + shift) - math.sin(shift)) / k, abs=1e-11)


def test_panels_batch_shape():
    lo = np.zeros((3, 2))
    hi = np.ones((3, 2)) * np.arange(1, 3)
    k, e = gk15_panels(lambda x: x**2, lo, hi)
    assert k.shape == (3, 2)
    assert np.allclose(k, hi**3 / 3)
    assert np.all(e < 1e-14)
