import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import curve_fit

from cylcasimir.calibration import (
    ActuatorModel,
    CalibrationData,
    CalibrationPoint,
    Resonator,
    SpectrumTrace,
    casimir_shift_cp,
    casimir_shift_pp,
    curvature_kc,
    damped_least_squares,
    expected_std_errors,
    fit_gap_powerlaw,
    fit_lorentzian,
    fit_parabola,
    freq_shift_from_gradient,
    frequency_shift,
    invert_shift_ratio,
    load_calibration_file,
    lorentzian_model,
    parabola_model,
    parallelism_from_parabola,
    powerlaw_model,
    save_calibration_file,
    shift_ratio,
    synth_dataset,
    trial_seeds,
)
from cylcasimir.core_model import CylinderPlaneGeometry, casimir_force_pfa, electrostatic_force_pfa
from cylcasimir.errors import DegenerateFit, InvalidGeometry, PeakOutsideWindow, PoleInsideData

RES = Resonator(nu0=527.3, m_eff=1.2e-3)
LORENTZ_TRUTH = dict(peak_freq=527.3, width=4.0, amplitude=4.0, floor=0.2)
POWER_TRUTH = dict(a_offset=0.0, b_scale=-554.2562584222089, V_MAX=177.4)


def signed_gradient(force, d, h_rel=1e-5):
    # attractive force points towards the plate: F = -|F|
    h = h_rel * d
    return -(force(d + h) - force(d - h)) / (2 * h)


@pytest.mark.parametrize("d", [1e-6, 3e-6, 8e-6])
def test_curvature_is_electrostatic_gradient_per_volt_squared(d):
    a, L = 0.51, 1e-2
    grad = signed_gradient(lambda g: electrostatic_force_pfa(CylinderPlaneGeometry(a, L, g), 1.0), d)
    kc = curvature_kc(CylinderPlaneGeometry(a, L, d), RES)
    assert kc == pytest.approx(float(freq_shift_from_gradient(RES, grad)), rel=1e-8)
    assert kc < 0


@pytest.mark.parametrize("d", [1e-6, 3e-6])
def test_casimir_shifts_are_force_gradients(d):
    a, L, A = 0.51, 1e-2, 1e-4
    grad = signed_gradient(lambda g: casimir_force_pfa(CylinderPlaneGeometry(a, L, g), warn=False), d)
    assert casimir_shift_cp(CylinderPlaneGeometry(a, L, d), RES) == pytest.approx(
        float(freq_shift_from_gradient(RES, grad)), rel=1e-8)
    pp_force = lambda g: math.pi**2 * 1.054571817e-34 * 299792458.0 * A / (240 * g**4)
    assert casimir_shift_pp(A, d, RES) == pytest.approx(
        float(freq_shift_from_gradient(RES, signed_gradient(pp_force, d))), rel=1e-8)


def test_shifts_reject_tilt():
    with pytest.raises(InvalidGeometry):
        curvature_kc(CylinderPlaneGeometry(0.51, 1e-2, 1e-6, theta=1e-5), RES)


def test_frequency_shift_linearisation():
    assert frequency_shift(-2.0, 500.0) == pytest.approx(-2e-3)


positive = st.floats(min_value=1e-3, max_value=1e3)


@given(L=positive, a=positive, d=positive, A=positive)
@settings(max_examples=200)
def test_shift_ratio_identity(L, a, d, A):
    L, a, d, A = L * 1e-2, a * 1e-3, d * 1e-8, A * 1e-4
    cp = casimir_shift_cp(CylinderPlaneGeometry(a, L, d), RES)
    assert shift_ratio(L, a, d, A) == pytest.approx(cp / casimir_shift_pp(A, d, RES), rel=1e-12)


@given(ratio=st.floats(min_value=1e-3, max_value=1e3), a=positive, d=positive)
def test_inversion_round_trip(ratio, a, d):
    a, d = a * 1e-3, d * 1e-8
    l_over_a = invert_shift_ratio(ratio, a, d)
    assert shift_ratio(l_over_a, a, d, 1.0) == pytest.approx(ratio, rel=1e-12)


def test_parabola_exact_recovery():
    x = np.arange(-100.0, 101.0, 5.0)
    data = synth_dataset("parabola", dict(curvature=-1e-4, vertex_x=54.8, vertex_y=527.0), x)
    fit = fit_parabola(data)
    assert fit.params["curvature"] == pytest.approx(-1e-4, rel=1e-10)
    assert fit.params["vertex_x"] == pytest.approx(54.8, rel=1e-10)
    assert fit.params["vertex_y"] == pytest.approx(527.0, rel=1e-12)
    assert fit.dof == len(x) - 3


@given(scale=st.floats(min_value=0.1, max_value=10), offset=st.floats(min_value=-100, max_value=100),
       shift=st.floats(min_value=-50, max_value=50))
@settings(max_examples=30)
def test_parabola_affine_equivariance(scale, offset, shift):
    x = np.arange(-100.0, 101.0, 5.0)
    data = synth_dataset("parabola", dict(curvature=-1e-4, vertex_x=20.0, vertex_y=527.0), x, 0.2, seed=3)
    base = fit_parabola(data)
    moved = fit_parabola(CalibrationData(x + shift, scale * data.y + offset, scale * data.sigma))
    assert moved.params["curvature"] == pytest.approx(scale * base.params["curvature"], rel=1e-8)
    assert moved.params["vertex_x"] == pytest.approx(base.params["vertex_x"] + shift, rel=1e-8, abs=1e-8)
    assert moved.params["vertex_y"] == pytest.approx(scale * base.params["vertex_y"] + offset, rel=1e-8)
    assert moved.std_errors["vertex_x"] == pytest.approx(base.std_errors["vertex_x"], rel=1e-6)


def test_parabola_errors_match_nonlinear_fit():
    x = np.arange(-100.0, 101.0, 5.0)
    data = synth_dataset("parabola", dict(curvature=-1e-4, vertex_x=30.0, vertex_y=527.0), x, 0.2, seed=11)
    fit = fit_parabola(data)
    popt, pcov = curve_fit(parabola_model, data.x, data.y, p0=[-1e-4, 30.0, 527.0], sigma=data.sigma)
    for i, name in enumerate(["curvature", "vertex_x", "vertex_y"]):
        assert fit.params[name] == pytest.approx(popt[i], rel=1e-6)
        assert fit.std_errors[name] == pytest.approx(math.sqrt(pcov[i, i]), rel=1e-4)


def test_parabola_degenerate_and_warning():
    with pytest.raises(DegenerateFit):
        fit_parabola(CalibrationData([1, 1, 2, 2], [1, 2, 3, 4], 1.0))
    with pytest.raises(DegenerateFit):
        fit_parabola(CalibrationData([0, 1, 2, 3], [0, 1, 2, 3], 1.0))
    x = np.linspace(0, 10, 11)
    with pytest.warns(RuntimeWarning):
        fit_parabola(synth_dataset("parabola", dict(curvature=1.0, vertex_x=30.0, vertex_y=0.0), x))
    with pytest.raises(ValueError):
        fit_parabola(CalibrationData([0, 1, 2], [0, 1, 4], 1.0))


def test_parallelism_resolution():
    x = np.arange(-100.0, 101.0, 5.0)
    fit = fit_parabola(synth_dataset("parabola", dict(curvature=-1e-4, vertex_x=54.8, vertex_y=527.0), x, 0.2, seed=1))
    act = ActuatorModel(alpha_act=150e-9, spacing=0.02)
    assert parallelism_from_parabola(fit, act) == pytest.approx(fit.std_errors["vertex_x"] * 150e-9 / 0.02)


def test_powerlaw_exact_recovery_and_gap():
    v = np.arange(0.0, 71.0, 10.0)
    fit = fit_gap_powerlaw(synth_dataset("powerlaw", POWER_TRUTH, v),
                           ActuatorModel(150e-9, 0.02, alpha_act_err=15e-9))
    assert fit.params["V_MAX"] == pytest.approx(177.4, rel=1e-9)
    assert fit.extra["d_in"] == pytest.approx(150e-9 * 177.4, rel=1e-9)
    # the actuator calibration error dominates d_in here
    assert fit.extra["d_in_err"] == pytest.approx(15e-9 * 177.4, rel=1e-6)


def test_powerlaw_agrees_with_scipy():
    v = np.arange(0.0, 71.0, 10.0)
    data = synth_dataset("powerlaw", POWER_TRUTH, v, 0.05, seed=4, relative=True)
    fit = fit_gap_powerlaw(data)
    popt, pcov = curve_fit(powerlaw_model, data.x, data.y, p0=list(fit.params.values()), sigma=data.sigma)
    assert fit.params["V_MAX"] == pytest.approx(popt[2], rel=1e-5)
    assert fit.std_errors["V_MAX"] == pytest.approx(math.sqrt(pcov[2, 2]), rel=1e-3)


def test_powerlaw_pole_checks():
    v = np.arange(0.0, 71.0, 10.0)
    data = synth_dataset("powerlaw", POWER_TRUTH, v)
    with pytest.raises(PoleInsideData):
        fit_gap_powerlaw(data, v_max_guess=60.0)


def test_lorentzian_recovery_and_scipy_agreement():
    f = np.linspace(527.3 - 6.25, 527.3 + 6.25, 801)
    data = synth_dataset("lorentzian", LORENTZ_TRUTH, f, 0.06, seed=8)
    fit = fit_lorentzian(data)
    popt, pcov = curve_fit(lorentzian_model, f, data.y, p0=[527.0, 3.0, 3.0, 0.1], sigma=data.sigma)
    for i, name in enumerate(["peak_freq", "width", "amplitude", "floor"]):
        assert fit.params[name] == pytest.approx(popt[i], rel=1e-6, abs=1e-9)
        assert fit.std_errors[name] == pytest.approx(math.sqrt(pcov[i, i]), rel=1e-3)
    predicted = expected_std_errors("lorentzian", LORENTZ_TRUTH, f, 0.06)["peak_freq"]
    assert fit.std_errors["peak_freq"] == pytest.approx(predicted, rel=0.2)


def test_lorentzian_from_trace():
    f = np.linspace(500.0, 560.0, 200)
    trace = SpectrumTrace(f, lorentzian_model(f, 531.0, 4.0, 4.0, 0.2))
    assert fit_lorentzian(trace).params["peak_freq"] == pytest.approx(531.0, rel=1e-10)


def test_lorentzian_peak_outside_window():
    f = np.linspace(500.0, 520.0, 100)
    with pytest.raises(PeakOutsideWindow):
        fit_lorentzian(SpectrumTrace(f, lorentzian_model(f, 530.0, 8.0, 40.0, 0.0)))


def test_damped_least_squares_linear_problem():
    x = np.linspace(0, 1, 20)
    y = 3.0 * x + 1.0
    p, chi2, J, n = damped_least_squares(lambda q: q[0] * x + q[1], [0.0, 0.0], y, np.ones_like(x))
    assert p == pytest.approx([3.0, 1.0], rel=1e-8)
    assert chi2 < 1e-16


def test_synth_is_deterministic_and_seeds_are_distinct():
    x = np.linspace(0, 1, 10)
    a = synth_dataset("parabola", dict(curvature=1.0, vertex_x=0.5, vertex_y=0.0), x, 0.1, seed=5)
    b = synth_dataset("parabola", dict(curvature=1.0, vertex_x=0.5, vertex_y=0.0), x, 0.1, seed=5)
    assert np.array_equal(a.y, b.y)
    seeds = trial_seeds(2024, 100)
    assert len(set(seeds)) == 100
    assert seeds == trial_seeds(2024, 100)
    with pytest.raises(ValueError):
        synth_dataset("cubic", {}, x)


def test_calibration_points_round_trip(tmp_path):
    points = [CalibrationPoint(0.0, 1.5, 0.1), CalibrationPoint(1.0, 2.5, 0.2)]
    data = CalibrationData.from_points(points, "V", "Hz")
    assert data.points() == points
    path = tmp_path / "cal.dat"
    save_calibration_file(path, data, ["synthetic"])
    back = load_calibration_file(path)
    assert (back.x_unit, back.y_unit) == ("V", "Hz")
    assert np.array_equal(back.y, data.y) and np.array_equal(back.sigma, data.sigma)


@pytest.mark.parametrize("body,match", [
    ("0 1 1\n", "units"),
    ("# units: V Hz\n0 1\n", ":2:"),
    ("# units: V Hz\n0 1 1\n1 2 -1\n", ":3:"),
    ("# units: V Hz\n0 one 1\n", ":2:"),
    ("# units: V\n", ":1:"),
])
def test_calibration_file_errors(tmp_path, body, match):
    path = tmp_path / "bad.dat"
    path.write_text(body)
    with pytest.raises(ValueError, match=match):
        load_calibration_file(path)


def test_input_validation():
    with pytest.raises(ValueError):
        CalibrationPoint(0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        ActuatorModel(alpha_act=-1.0, spacing=0.02)
    with pytest.raises(ValueError):
        SpectrumTrace([2.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        ActuatorModel(150e-9, 0.02).gap(10.0)
    assert ActuatorModel(150e-9, 0.02, d_in=20e-6).gap(10.0) == pytest.approx(20e-6 - 1.5e-6)
