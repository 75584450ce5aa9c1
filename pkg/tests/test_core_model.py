import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import constants as sc
from scipy.integrate import quad

from cylcasimir.core_model import (
    SERIES_SWITCH_ALPHA,
    CylinderPlaneGeometry,
    PlanePlane,
    SpherePlane,
    baseline_force,
    casimir_force_pfa,
    electrostatic_force_exact,
    electrostatic_force_pfa,
    equivalent_voltage,
    nonparallel_factor_cas,
    nonparallel_factor_el,
)
from cylcasimir.errors import ContactError, InvalidGeometry, PfaValidityWarning, TiltNotSupported


def capacitance_per_length(a, d):
    # line-charge image solution, evaluated with complex arithmetic so the
    # gap derivative can be taken by complex step
    return 2 * np.pi * sc.epsilon_0 / np.arccosh((d + a) / a)


def complex_step(f, x, h=1e-30):
    return np.imag(f(x + 1j * h * x)) / (h * x)


@pytest.mark.parametrize("a,d", [(1.0, 0.01), (1e-4, 1e-6), (0.51, 1e-6), (2.0, 3.0)])
def test_exact_force_is_energy_derivative(a, d):
    L, v0 = 0.3, 0.7
    force = electrostatic_force_exact(CylinderPlaneGeometry(a, L, d), v0)
    oracle = -0.5 * v0**2 * L * complex_step(lambda dd: capacitance_per_length(a, dd), d)
    assert force == pytest.approx(oracle, rel=1e-12)


def test_exact_force_reference_value():
    assert electrostatic_force_exact(CylinderPlaneGeometry(1.0, 1.0, 0.01), 1.0) == pytest.approx(9.82637e-9, rel=1e-5)


def test_exact_force_small_gap_precision():
    # at d/a = 1e-10 the exact force must still agree with the proximity law
    geom = CylinderPlaneGeometry(1.0, 1.0, 1e-10)
    ratio = electrostatic_force_exact(geom, 1.0) / electrostatic_force_pfa(geom, 1.0)
    assert ratio == pytest.approx(1 - 1e-10 / 12, abs=1e-13)


def test_exact_force_rejects_tilt():
    with pytest.raises(TiltNotSupported):
        electrostatic_force_exact(CylinderPlaneGeometry(1e-4, 1e-2, 1e-6, theta=1e-5), 1.0)


def test_pfa_forces_from_local_plate_integral():
    a, L, d, v0 = 1e-4, 1e-2, 1e-6, 0.05
    geom = CylinderPlaneGeometry(a, L, d)
    # paraboloid gap d + x^2 / 2a over the whole real line, x = w sqrt(2 a d)
    w = math.sqrt(2 * a * d)
    el = 2 * L * w * quad(lambda u: sc.epsilon_0 * v0**2 / (2 * (d * (1 + u**2)) ** 2), 0, np.inf)[0]
    cas = 2 * L * w * quad(lambda u: np.pi**2 * sc.hbar * sc.c / (240 * (d * (1 + u**2)) ** 4), 0, np.inf)[0]
    assert electrostatic_force_pfa(geom, v0) == pytest.approx(el, rel=1e-9)
    assert casimir_force_pfa(geom) == pytest.approx(cas, rel=1e-9)


def test_tilt_factors_from_averaging_over_length():
    alpha = 0.3
    # tilted cylinder: local gap d (1 + alpha s), s uniform on [-1, 1]
    el = 0.5 * quad(lambda s: (1 + alpha * s) ** -1.5, -1, 1)[0]
    cas = 0.5 * quad(lambda s: (1 + alpha * s) ** -3.5, -1, 1)[0]
    assert nonparallel_factor_el(alpha) == pytest.approx(el, rel=1e-12)
    assert nonparallel_factor_cas(alpha) == pytest.approx(cas, rel=1e-12)


def test_tilted_geometry_uses_factor():
    base = CylinderPlaneGeometry(1e-4, 1e-2, 1e-6)
    tilted = CylinderPlaneGeometry(1e-4, 1e-2, 1e-6, theta=math.asin(0.2 * 2e-6 / 1e-2))
    assert tilted.alpha == pytest.approx(0.2)
    ratio = electrostatic_force_pfa(tilted, 1.0) / electrostatic_force_pfa(base, 1.0)
    assert ratio == pytest.approx(nonparallel_factor_el(0.2), rel=1e-12)
    assert nonparallel_factor_el(0.2) == pytest.approx(1.025815, abs=1e-6)
    assert nonparallel_factor_cas(0.1) == pytest.approx(1.026726, abs=1e-6)


@given(st.floats(min_value=-0.99, max_value=0.99, allow_nan=False))
def test_tilt_factors_even_and_at_least_one(alpha):
    for f in (nonparallel_factor_el, nonparallel_factor_cas):
        assert f(alpha) == f(-alpha)
        assert f(alpha) >= 1.0


def test_series_branch_is_continuous():
    below, above = SERIES_SWITCH_ALPHA * (1 - 1e-9), SERIES_SWITCH_ALPHA * (1 + 1e-9)
    # the closed form loses about eps / alpha to cancellation at the switch
    for f in (nonparallel_factor_el, nonparallel_factor_cas):
        assert f(below) == pytest.approx(f(above), rel=1e-11)


@given(st.floats(min_value=0.0, max_value=0.95), st.floats(min_value=0.0, max_value=0.95))
def test_tilt_factors_monotone(a1, a2):
    lo, hi = sorted((a1, a2))
    assert nonparallel_factor_el(lo) <= nonparallel_factor_el(hi)
    assert nonparallel_factor_cas(lo) <= nonparallel_factor_cas(hi)


def test_contact_raises():
    with pytest.raises(ContactError):
        CylinderPlaneGeometry(1e-4, 1e-2, 1e-6, theta=1e-3)
    with pytest.raises(ContactError):
        nonparallel_factor_el(1.0)


@pytest.mark.parametrize("kwargs", [dict(a=0, L=1, d=1), dict(a=1, L=-1, d=1), dict(a=1, L=1, d=float("nan"))])
def test_invalid_geometry(kwargs):
    with pytest.raises(InvalidGeometry):
        CylinderPlaneGeometry(**kwargs)


def test_contact_error_is_value_error():
    assert issubclass(ContactError, ValueError)


def test_casimir_pfa_warns_at_large_gap():
    with pytest.warns(PfaValidityWarning):
        casimir_force_pfa(CylinderPlaneGeometry(1.0, 1.0, 0.3))


def test_plane_plane_baselines():
    A, d, v0 = 1e-6, 1e-6, 0.05
    pp = PlanePlane(A)
    assert baseline_force(pp, "electrostatic", d, v0) == pytest.approx(sc.epsilon_0 * A * v0**2 / (2 * d**2), rel=1e-15)
    assert baseline_force(pp, "casimir", d) / A == pytest.approx(1.300e-3, rel=1e-3)


def test_sphere_plane_electrostatic_matches_capacitance_derivative():
    R, v0 = 1e-4, 0.05

    def capacitance(d):
        u = math.acosh(1 + d / R)
        return 4 * math.pi * sc.epsilon_0 * R * math.sinh(u) * sum(1 / math.sinh(n * u) for n in range(1, int(700 / u)))

    for d in (1e-6, 1e-5):
        h = 1e-4 * d
        oracle = -0.5 * v0**2 * (capacitance(d + h) - capacitance(d - h)) / (2 * h)
        assert baseline_force(SpherePlane(R), "electrostatic", d, v0) == pytest.approx(oracle, rel=1e-6)


def test_sphere_plane_casimir_pfa_value():
    R, d = 1e-4, 1e-6
    assert baseline_force(SpherePlane(R), "casimir", d) == pytest.approx(np.pi**3 * sc.hbar * sc.c * R / (360 * d**3))


def test_baseline_rejects_unknown_kind():
    with pytest.raises(ValueError):
        baseline_force(PlanePlane(1.0), "gravity", 1e-6)


@given(st.floats(min_value=1e-8, max_value=1e-3), st.floats(min_value=1e-5, max_value=1.0))
@settings(max_examples=50)
def test_equivalent_voltage_balances_forces(d, a):
    geom = CylinderPlaneGeometry(a, 1e-2, d)
    v = equivalent_voltage(d)
    assert electrostatic_force_pfa(geom, v) == pytest.approx(casimir_force_pfa(geom, warn=False), rel=1e-12)


def test_equivalent_voltage_scale():
    assert equivalent_voltage(1e-6) == pytest.approx(13.5479e-3, rel=1e-5)
    assert equivalent_voltage(3e-6) == pytest.approx(equivalent_voltage(1e-6) / 3, rel=1e-14)
