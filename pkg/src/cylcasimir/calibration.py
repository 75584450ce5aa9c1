"""Resonator frequency-shift models and the calibration fits.

A force acting on a cantilever resonator shifts its squared frequency by
``Delta nu^2 = -(1 / 4 pi^2 m) dF/dd``.  Here ``F`` is the *signed* force
along the gap coordinate, so an attractive force is negative and
``dF/dd = -d|F|/dd > 0``: attraction lowers the frequency.

Fitting procedures
------------------
``fit_parabola``      weighted linear least squares for a parabola (the
                      parallelism scan and the bias-voltage scans).
``fit_gap_powerlaw``  ``k_c = a + b / (V_MAX - V_PZT)^2.5``; the pole
                      ``V_MAX`` gives the initial gap ``d_in = alpha_act V_MAX``.
``fit_lorentzian``    resonance peak ``A / ((f - f0)^2 + (G/2)^2) + floor``.

The two nonlinear fits use :func:`damped_least_squares`.  Standard errors
always come from the inverse normal matrix scaled by ``chi2 / dof``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .constants import C, EPS0, HBAR
from .core_model import CylinderPlaneGeometry
from .errors import DegenerateFit, InvalidGeometry, NonConvergence, PeakOutsideWindow, PoleInsideData

__all__ = [
    "Resonator",
    "ActuatorModel",
    "CalibrationPoint",
    "CalibrationData",
    "SpectrumTrace",
    "FitResult",
    "freq_shift_from_gradient",
    "frequency_shift",
    "curvature_kc",
    "casimir_shift_cp",
    "casimir_shift_pp",
    "shift_ratio",
    "invert_shift_ratio",
    "parabola_model",
    "powerlaw_model",
    "lorentzian_model",
    "MODELS",
    "damped_least_squares",
    "expected_std_errors",
    "fit_parabola",
    "parallelism_from_parabola",
    "fit_gap_powerlaw",
    "fit_lorentzian",
    "synth_dataset",
    "trial_seeds",
    "load_calibration_file",
    "save_calibration_file",
    "POWERLAW_EXPONENT",
]

POWERLAW_EXPONENT = 2.5
MAX_ITER = 200
JAC_REL_STEP = 1e-6
CHI2_REL_TOL = 1e-10


@dataclass(frozen=True)
class Resonator:
    nu0: float
    m_eff: float
    bandwidth: float = 4.0

    def __post_init__(self):
        for name in ("nu0", "m_eff", "bandwidth"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class ActuatorModel:
    """Piezo actuator pair: ``d = d_in - alpha_act V_PZT``.

    ``alpha_act`` in m/V (``alpha_act_err`` its standard uncertainty),
    ``spacing`` the distance between the two actuators in m.
    """

    alpha_act: float
    spacing: float
    d_in: float | None = None
    alpha_act_err: float = 0.0

    def __post_init__(self):
        if not self.alpha_act > 0:
            raise ValueError(f"alpha_act must be positive, got {self.alpha_act!r}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing!r}")
        if not self.alpha_act_err >= 0:
            raise ValueError("alpha_act_err must be >= 0")

    def gap(self, v_pzt):
        if self.d_in is None:
            raise ValueError("d_in is not set")
        return self.d_in - self.alpha_act * np.asarray(v_pzt, dtype=float)


@dataclass(frozen=True)
class CalibrationPoint:
    x: float
    y: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")


@dataclass(frozen=True)
class CalibrationData:
    """Columns ``x, y, sigma`` plus the unit labels from the file header."""

    x: np.ndarray
    y: np.ndarray
    sigma: np.ndarray
    x_unit: str = ""
    y_unit: str = ""

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        sigma = np.broadcast_to(np.asarray(self.sigma, dtype=float), x.shape).copy()
        if x.ndim != 1 or y.shape != x.shape:
            raise ValueError("x and y must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("x and y must be finite")
        if np.any(~(sigma > 0)) or not np.all(np.isfinite(sigma)):
            raise ValueError("sigma must be positive and finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def from_points(cls, points: Sequence[CalibrationPoint], x_unit: str = "", y_unit: str = ""):
        return cls(np.array([p.x for p in points]), np.array([p.y for p in points]),
                   np.array([p.sigma for p in points]), x_unit, y_unit)

    def points(self) -> list[CalibrationPoint]:
        return [CalibrationPoint(float(a), float(b), float(s)) for a, b, s in zip(self.x, self.y, self.sigma)]

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class SpectrumTrace:
    freq: np.ndarray
    amplitude: np.ndarray

    def __post_init__(self):
        freq = np.asarray(self.freq, dtype=float)
        amp = np.asarray(self.amplitude, dtype=float)
        if freq.ndim != 1 or amp.shape != freq.shape:
            raise ValueError("freq and amplitude must be 1-D arrays of equal length")
        if np.any(np.diff(freq) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        if np.any(amp < 0):
            raise ValueError("amplitudes must be >= 0")
        object.__setattr__(self, "freq", freq)
        object.__setattr__(self, "amplitude", amp)


@dataclass
class FitResult:
    params: dict[str, float]
    std_errors: dict[str, float]
    chi2: float
    dof: int
    covariance: np.ndarray | None = None
    residuals: np.ndarray | None = None
    n_iter: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def reduced_chi2(self) -> float:
        return self.chi2 / self.dof

    def report(self) -> str:
        width = max(len(k) for k in self.params)
        lines = [f"{k:<{width}} = {v:.10g} +/- {self.std_errors.get(k, float('nan')):.3g}"
                 for k, v in self.params.items()]
        lines.append(f"chi2/dof = {self.chi2:.6g}/{self.dof} = {self.reduced_chi2:.6g}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# frequency-shift models


def freq_shift_from_gradient(res: Resonator, force_gradient):
    """Squared-frequency shift (Hz^2) from the gradient of the signed force (N/m)."""
    return -np.asarray(force_gradient, dtype=float) / (4.0 * math.pi**2 * res.m_eff) + 0.0


def frequency_shift(delta_nu2, nu0: float):
    """Linearised frequency shift ``Delta nu = Delta nu^2 / (2 nu0)`` in Hz."""
    return np.asarray(delta_nu2) / (2.0 * nu0)


def _require_parallel(geom: CylinderPlaneGeometry) -> None:
    if geom.theta != 0:
        raise InvalidGeometry("closed-form frequency shifts assume theta = 0")


def curvature_kc(geom: CylinderPlaneGeometry, res: Resonator) -> float:
    """Coefficient ``k_c`` (Hz^2/V^2) of ``Delta nu^2 = k_c V0^2`` for the electrostatic force."""
    _require_parallel(geom)
    return -3.0 * EPS0 * math.sqrt(geom.a) * geom.L / (16.0 * math.sqrt(2.0) * math.pi * res.m_eff * geom.d**2.5)


def casimir_shift_cp(geom: CylinderPlaneGeometry, res: Resonator) -> float:
    """Squared-frequency shift (Hz^2) from the ideal cylinder-plane Casimir force."""
    _require_parallel(geom)
    return -7.0 * math.pi * HBAR * C * geom.L * math.sqrt(geom.a) / (
        3072.0 * math.sqrt(2.0) * res.m_eff * geom.d**4.5)


def casimir_shift_pp(A: float, d: float, res: Resonator) -> float:
    """Squared-frequency shift (Hz^2) from the ideal plane-plane Casimir force."""
    if not (A > 0 and d > 0):
        raise InvalidGeometry("A and d must be positive")
    return -HBAR * C * A / (240.0 * res.m_eff * d**5)


def shift_ratio(L: float, a: float, d: float, A: float) -> float:
    """Cylinder-plane over plane-plane Casimir shift for equal modal masses."""
    if not (L > 0 and a > 0 and d > 0 and A > 0):
        raise ValueError("L, a, d and A must be positive")
    return 35.0 * math.pi / (64.0 * math.sqrt(2.0)) * L * math.sqrt(a * d) / A


def invert_shift_ratio(ratio: float, a: float, d: float) -> float:
    """The ``L/A`` (1/m) that produces ``ratio`` in :func:`shift_ratio`."""
    if not (ratio > 0 and a > 0 and d > 0):
        raise ValueError("ratio, a and d must be positive")
    return ratio * 64.0 * math.sqrt(2.0) / (35.0 * math.pi * math.sqrt(a * d))


# ---------------------------------------------------------------------------
# fit models


def parabola_model(x, curvature, vertex_x, vertex_y):
    x = np.asarray(x, dtype=float)
    return curvature * (x - vertex_x) ** 2 + vertex_y


def powerlaw_model(v, a_offset, b_scale, V_MAX):
    v = np.asarray(v, dtype=float)
    return a_offset + b_scale / (V_MAX - v) ** POWERLAW_EXPONENT


def lorentzian_model(f, peak_freq, width, amplitude, floor):
    f = np.asarray(f, dtype=float)
    return amplitude / ((f - peak_freq) ** 2 + (0.5 * width) ** 2) + floor


MODELS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "parabola": (parabola_model, ("curvature", "vertex_x", "vertex_y")),
    "powerlaw": (powerlaw_model, ("a_offset", "b_scale", "V_MAX")),
    "lorentzian": (lorentzian_model, ("peak_freq", "width", "amplitude", "floor")),
}


def _as_data(points) -> CalibrationData:
    if isinstance(points, CalibrationData):
        return points
    if isinstance(points, SpectrumTrace):
        return CalibrationData(points.freq, points.amplitude, 1.0)
    return CalibrationData.from_points(list(points))


def _numeric_jacobian(f, p: np.ndarray, rel_step: float = JAC_REL_STEP) -> np.ndarray:
    cols = []
    for k in range(len(p)):
        h = rel_step * max(abs(p[k]), 1e-12)
        up, dn = p.copy(), p.copy()
        up[k] += h
        dn[k] -= h
        cols.append((f(up) - f(dn)) / (2.0 * h))
    return np.column_stack(cols)


def damped_least_squares(func: Callable[[np.ndarray], np.ndarray], p0, y, sigma,
                         max_iter: int = MAX_ITER, valid: Callable[[np.ndarray], bool] | None = None):
    """Minimise ``sum(((y - func(p)) / sigma)^2)`` by Levenberg-Marquardt.

    Jacobians are central differences with relative step 1e-6.  Iteration
    stops once an accepted step changes chi2 by less than 1e-10 of its value
    (or chi2 itself is at round-off level).  ``valid`` may reject parameter
    vectors outside the model's domain; such trial steps count as failures
    and increase the damping.

    Returns ``(params, chi2, jacobian_at_params, n_iter)``.
    """
    y = np.asarray(y, dtype=float)
    w = 1.0 / np.asarray(sigma, dtype=float)
    p = np.asarray(p0, dtype=float).copy()
    scale = np.sum((y * w) ** 2)

    def chi2_of(q):
        if valid is not None and not valid(q):
            return math.inf
        r = (y - func(q)) * w
        c = float(r @ r)
        return c if math.isfinite(c) else math.inf

    chi2 = chi2_of(p)
    if not math.isfinite(chi2):
        raise NonConvergence("initial parameters give a non-finite chi2")
    lam = 1e-3
    for it in range(1, max_iter + 1):
        J = _numeric_jacobian(func, p) * w[:, None]
        r = (y - func(p)) * w
        JTJ = J.T @ J
        g = J.T @ r
        diag = np.diag(JTJ).copy()
        diag[diag <= 0] = 1.0
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(JTJ + lam * np.diag(diag), g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = p + step
            c_new = chi2_of(trial)
            if c_new <= chi2:
                accepted = True
                break
            lam *= 10.0
        if not accepted:
            # no downhill direction left: we are at the minimum to machine precision
            return p, chi2, _numeric_jacobian(func, p), it
        change = chi2 - c_new
        p, chi2 = trial, c_new
        lam = max(lam / 10.0, 1e-12)
        if change <= CHI2_REL_TOL * chi2 or chi2 <= 1e-28 * scale:
            return p, chi2, _numeric_jacobian(func, p), it
    raise NonConvergence(f"no convergence after {max_iter} iterations (chi2 = {chi2:.6g})")


def _covariance(J_weighted: np.ndarray, chi2: float, dof: int) -> np.ndarray:
    normal = J_weighted.T @ J_weighted
    try:
        inv = np.linalg.inv(normal)
    except np.linalg.LinAlgError:
        raise DegenerateFit("normal matrix is singular") from None
    return inv * (chi2 / dof)


def expected_std_errors(model: str, truth: Mapping[str, float], x, sigma) -> dict[str, float]:
    """Parameter standard errors predicted for noise ``sigma`` (unscaled inverse normal matrix).

    Used to design synthetic experiments with a target parameter precision.
    """
    func, names = MODELS[model]
    p = np.array([truth[n] for n in names], dtype=float)
    x = np.asarray(x, dtype=float)
    w = 1.0 / np.broadcast_to(np.asarray(sigma, dtype=float), x.shape)
    J = _numeric_jacobian(lambda q: func(x, *q), p) * w[:, None]
    cov = np.linalg.inv(J.T @ J)
    return {n: float(math.sqrt(cov[i, i])) for i, n in enumerate(names)}


# ---------------------------------------------------------------------------
# fitters


def fit_parabola(points) -> FitResult:
    """Weighted parabola fit ``y = c (x - x0)^2 + y0``.

    Solved as a linear fit of a quadratic polynomial in ``x - mean(x)``;
    vertex and curvature errors follow by linear propagation of the
    polynomial covariance.

    Raises
    ------
    DegenerateFit
        Fewer than three distinct x values, or zero fitted curvature.
    """
    data = _as_data(points)
    if len(data) < 4:
        raise ValueError(f"parabola fit needs at least 4 points, got {len(data)}")
    xc = float(np.mean(data.x))
    u = data.x - xc
    w = 1.0 / data.sigma
    A = np.column_stack([np.ones_like(u), u, u * u])
    Aw = A * w[:, None]
    if np.linalg.matrix_rank(Aw) < 3:
        raise DegenerateFit("design matrix is rank-deficient (need three distinct x values)")
    coef, *_ = np.linalg.lstsq(Aw, data.y * w, rcond=None)
    c0, c1, c2 = coef
    # curvature below round-off relative to the data scale counts as zero
    span = float(np.ptp(u))
    if abs(c2) * span * span <= 1e-12 * max(float(np.max(np.abs(data.y))), np.finfo(float).tiny):
        raise DegenerateFit("fitted curvature is zero; the vertex is undefined")
    resid = data.y - A @ coef
    chi2 = float(np.sum((resid * w) ** 2))
    dof = len(data) - 3
    cov_c = _covariance(Aw, chi2, dof)
    u0 = -c1 / (2.0 * c2)
    y0 = c0 - c1 * c1 / (4.0 * c2)
    # d(curvature, vertex_x, vertex_y) / d(c0, c1, c2)
    G = np.array([
        [0.0, 0.0, 1.0],
        [0.0, -1.0 / (2.0 * c2), c1 / (2.0 * c2**2)],
        [1.0, -c1 / (2.0 * c2), c1 * c1 / (4.0 * c2**2)],
    ])
    cov = G @ cov_c @ G.T
    params = {"curvature": float(c2), "vertex_x": float(xc + u0), "vertex_y": float(y0)}
    errors = {k: float(math.sqrt(max(cov[i, i], 0.0))) for i, k in enumerate(params)}
    if not (data.x.min() <= params["vertex_x"] <= data.x.max()):
        warnings.warn("parabola vertex lies outside the data span; vertex error is extrapolated",
                      RuntimeWarning, stacklevel=2)
    return FitResult(params, errors, chi2, dof, covariance=cov, residuals=resid)


def parallelism_from_parabola(fit: FitResult, act: ActuatorModel) -> float:
    """Tilt resolution (rad) implied by the vertex uncertainty of a differential scan."""
    return fit.std_errors["vertex_x"] * act.alpha_act / act.spacing


def fit_gap_powerlaw(points, act: ActuatorModel | None = None, v_max_guess: float | None = None) -> FitResult:
    """Fit ``k_c = a + b / (V_MAX - V_PZT)^2.5`` to curvature-versus-actuator data.

    ``V_MAX`` starts at ``max(V_PZT) + 50 V`` (or ``v_max_guess``) with the
    linear parameters solved exactly for that start.  When ``act`` is given,
    ``d_in = alpha_act V_MAX`` is added to ``extra`` with an uncertainty that
    includes ``alpha_act_err``.

    Raises
    ------
    NonConvergence, PoleInsideData
    """
    data = _as_data(points)
    if len(data) < 5:
        raise ValueError(f"power-law fit needs at least 5 points, got {len(data)}")
    v, k, s = data.x, data.y, data.sigma
    vmax0 = float(v.max() + 50.0) if v_max_guess is None else float(v_max_guess)
    if vmax0 <= v.max():
        raise PoleInsideData("initial V_MAX must lie beyond every V_PZT")
    basis = np.column_stack([np.ones_like(v), (vmax0 - v) ** -POWERLAW_EXPONENT]) / s[:, None]
    (a0, b0), *_ = np.linalg.lstsq(basis, k / s, rcond=None)

    vmin_allowed = float(v.max())
    p, chi2, J, n_iter = damped_least_squares(
        lambda q: powerlaw_model(v, *q), [a0, b0, vmax0], k, s,
        valid=lambda q: q[2] > vmin_allowed,
    )
    if np.any(v >= p[2]):
        raise PoleInsideData(f"fitted V_MAX = {p[2]:.6g} V lies inside the data")
    dof = len(data) - 3
    if dof < 1:
        raise DegenerateFit("no degrees of freedom left")
    cov = _covariance(J / s[:, None], chi2, dof)
    names = MODELS["powerlaw"][1]
    params = dict(zip(names, map(float, p)))
    errors = {n: float(math.sqrt(max(cov[i, i], 0.0))) for i, n in enumerate(names)}
    resid = k - powerlaw_model(v, *p)
    result = FitResult(params, errors, chi2, dof, covariance=cov, residuals=resid, n_iter=n_iter)
    if act is not None:
        d_in = act.alpha_act * p[2]
        d_in_err = math.hypot(act.alpha_act * errors["V_MAX"], act.alpha_act_err * p[2])
        result.extra.update(d_in=d_in, d_in_err=d_in_err)
    return result


def _lorentzian_initial(f: np.ndarray, amp: np.ndarray) -> list[float]:
    i = int(np.argmax(amp))
    # refine the peak position with a parabola through the top three samples
    if 0 < i < len(f) - 1:
        y0, y1, y2 = amp[i - 1:i + 2]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        f0 = f[i] + float(np.clip(shift, -1, 1)) * 0.5 * (f[i + 1] - f[i - 1])
    else:
        f0 = f[i]
    floor = float(np.min(amp))
    height = float(amp[i] - floor)
    above = f[amp - floor >= 0.5 * height]
    width = float(above.max() - above.min()) if above.size > 1 else float(f[1] - f[0]) * 2
    width = max(width, float(np.min(np.diff(f))))
    return [f0, width, height * (0.5 * width) ** 2, floor]


def fit_lorentzian(spectrum, sigma=None) -> FitResult:
    """Fit a Lorentzian resonance ``A / ((f - f0)^2 + (G/2)^2) + floor``.

    ``spectrum`` is a :class:`SpectrumTrace` (unit weights unless ``sigma`` is
    given) or calibration data with its own ``sigma`` column.

    Raises
    ------
    NonConvergence, PeakOutsideWindow
    """
    if isinstance(spectrum, SpectrumTrace):
        data = CalibrationData(spectrum.freq, spectrum.amplitude, 1.0 if sigma is None else sigma)
    else:
        data = _as_data(spectrum)
    f, amp, s = data.x, data.y, data.sigma
    if len(f) < 8:
        raise ValueError(f"Lorentzian fit needs at least 8 points, got {len(f)}")
    p0 = _lorentzian_initial(f, amp)
    if f.max() - f.min() < p0[1]:
        raise ValueError("the frequency span must cover at least one resonance width")
    p, chi2, J, n_iter = damped_least_squares(
        lambda q: lorentzian_model(f, *q), p0, amp, s,
        valid=lambda q: q[1] > 0,
    )
    if not (f.min() <= p[0] <= f.max()):
        raise PeakOutsideWindow(f"fitted peak {p[0]:.6g} Hz lies outside the data span")
    p[1] = abs(p[1])
    dof = len(f) - 4
    cov = _covariance(J / s[:, None], chi2, dof)
    names = MODELS["lorentzian"][1]
    params = dict(zip(names, map(float, p)))
    errors = {n: float(math.sqrt(max(cov[i, i], 0.0))) for i, n in enumerate(names)}
    resid = amp - lorentzian_model(f, *p)
    return FitResult(params, errors, chi2, dof, covariance=cov, residuals=resid, n_iter=n_iter)


# ---------------------------------------------------------------------------
# synthetic data


def trial_seeds(master_seed: int, n: int) -> list[int]:
    """Independent per-trial seeds derived deterministically from ``master_seed``."""
    children = np.random.SeedSequence(master_seed).spawn(n)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def synth_dataset(model: str, truth: Mapping[str, float], x, noise_sigma=0.0, seed: int | None = 0,
                  relative: bool = False, x_unit: str = "", y_unit: str = "") -> CalibrationData:
    """Sample ``model`` at ``x`` and add independent Gaussian noise to y.

    ``noise_sigma`` is absolute, or a fraction of ``|y|`` when ``relative``.
    The sigma column holds the noise level (1 where it is zero, so the file
    stays valid).  Deterministic for a fixed ``seed``.
    """
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODELS)}")
    func, names = MODELS[model]
    missing = set(names) - set(truth)
    if missing:
        raise ValueError(f"missing truth parameters: {sorted(missing)}")
    x = np.asarray(x, dtype=float)
    clean = func(x, *(truth[n] for n in names))
    noise_sigma = np.asarray(noise_sigma, dtype=float)
    if np.any(noise_sigma < 0):
        raise ValueError("noise_sigma must be >= 0")
    sig = noise_sigma * np.abs(clean) if relative else np.broadcast_to(noise_sigma, x.shape)
    rng = np.random.default_rng(seed)
    y = clean + rng.standard_normal(x.shape) * sig
    reported = np.where(sig > 0, sig, 1.0)
    return CalibrationData(x, y, reported, x_unit, y_unit)


# ---------------------------------------------------------------------------
# file format: "# units: <x-unit> <y-unit>" header, then "x y sigma" rows


def load_calibration_file(path) -> CalibrationData:
    """Read a calibration data file; errors name the offending line."""
    x_unit = y_unit = None
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("units:"):
                units = body[6:].split()
                if len(units) != 2:
                    raise ValueError(f"{path}:{lineno}: units header needs exactly two units, got {units}")
                x_unit, y_unit = units
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns (x y sigma), got {len(parts)}")
        try:
            vals = [float(v) for v in parts]
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric value in {line!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"{path}:{lineno}: non-finite value")
        if not vals[2] > 0:
            raise ValueError(f"{path}:{lineno}: sigma must be positive, got {parts[2]}")
        rows.append(vals)
    if x_unit is None:
        raise ValueError(f"{path}: missing mandatory '# units: <x-unit> <y-unit>' header")
    if not rows:
        raise ValueError(f"{path}: no data rows")
    arr = np.array(rows)
    return CalibrationData(arr[:, 0], arr[:, 1], arr[:, 2], x_unit, y_unit)


def save_calibration_file(path, data: CalibrationData, comments: Sequence[str] = ()) -> None:
    lines = [f"# {c}" for c in comments]
    lines.append(f"# units: {data.x_unit or '1'} {data.y_unit or '1'}")
    lines.append("# x y sigma")
    lines += [f"{a:.17g} {b:.17g} {s:.17g}" for a, b, s in zip(data.x, data.y, data.sigma)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
