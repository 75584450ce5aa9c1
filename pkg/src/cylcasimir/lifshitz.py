"""Finite-temperature Lifshitz pressure and its proximity lift to the cylinder.

The plane-plane pressure is a Matsubara sum over ``xi_m = 2 pi m kB T / hbar``
of integrals over the dimensionless variable ``y = q d`` (``q`` the
imaginary-frequency wave number normal to the plates)::

    |P| = kB T / (pi d^3) sum'_m int_{m gamma}^{inf} y^2
          [ rho_TM e^{-2y} / (1 - rho_TM e^{-2y}) + (TM -> TE) ] dy

with ``gamma = 2 pi d kB T / (hbar c)`` and the m = 0 term at half weight.
``rho`` is the *squared* reflection amplitude, so ``0 <= rho <= 1`` and the
ideal-metal limit is ``rho = 1``.

Matsubara terms with ``m gamma > 40`` are below ``1e-30`` of the m = 0 term
and are not evaluated; the ``xi_max`` cutoff is applied on top of that.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR, KB
from .core_model import CylinderPlaneGeometry, casimir_force_pfa, PFA_WARN_D_OVER_A
from .dielectric import Drude, MaterialModel, PerfectConductor, Plasma, Tabulated, permittivity_at
from .errors import CutoffWarning, DomainError, InvalidGeometry, PfaValidityWarning, QuadratureError, TiltNotSupported
from .pfa import PfaScheme, area_weight, phi_breakpoints
from .quadrature import adaptive_gk15, gk15_panels

__all__ = [
    "ThermalState",
    "LifshitzConfig",
    "ReflectionCoefficients",
    "MIN_TEMPERATURE",
    "reflection_coeffs",
    "pressure_plane_plane",
    "casimir_cp_thermal",
    "normalized_ratio",
    "ideal_pressure_zero_t",
    "classical_pressure_limit",
]

MIN_TEMPERATURE = 0.5
_Y_NEGLIGIBLE = 40.0
_CHUNK = 2048
_MAX_REFINE = 6
OUTER_REL_TOL = 1e-6


@dataclass(frozen=True)
class ThermalState:
    """Temperature ``T`` in kelvin (at least 0.5 K)."""

    T: float

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T >= MIN_TEMPERATURE):
            raise DomainError(
                f"T must be >= {MIN_TEMPERATURE} K (use the zero-temperature closed forms below that), got {self.T!r}"
            )

    @property
    def beta(self) -> float:
        return 1.0 / (KB * self.T)

    def gamma(self, d: float) -> float:
        return 2.0 * math.pi * d * KB * self.T / (HBAR * C)

    @property
    def xi1(self) -> float:
        """First Matsubara frequency (rad/s)."""
        return 2.0 * math.pi * KB * self.T / HBAR

    def matsubara(self, m):
        return np.asarray(m) * self.xi1


@dataclass(frozen=True)
class LifshitzConfig:
    xi_max: float = 1e17
    rel_tol: float = 1e-9
    y_margin: float = 60.0

    def __post_init__(self):
        if not (self.xi_max > 0):
            raise ValueError(f"xi_max must be positive, got {self.xi_max!r}")
        if not (0 < self.rel_tol < 1e-3):
            raise ValueError(f"rel_tol must lie in (0, 1e-3), got {self.rel_tol!r}")
        if not (self.y_margin >= 30):
            raise ValueError(f"y_margin must be >= 30, got {self.y_margin!r}")

    def m_max(self, thermal: ThermalState) -> int:
        return int(math.floor(self.xi_max * thermal.beta * HBAR / (2.0 * math.pi)))


@dataclass(frozen=True)
class ReflectionCoefficients:
    rho_TM: np.ndarray | float
    rho_TE: np.ndarray | float


def _rho_positive_m(eps, p):
    """Squared TM/TE amplitudes for m >= 1, written to avoid cancellation when eps -> 1."""
    em1 = eps - 1.0
    s = np.sqrt(em1 + p * p)
    r_tm = em1 * ((eps + 1.0) * p * p - 1.0) / (eps * p + s) ** 2
    r_te = em1 / (s + p) ** 2
    return r_tm * r_tm, r_te * r_te


def _zero_mode_te(model: MaterialModel, y, d: float):
    if isinstance(model, PerfectConductor):
        return np.ones_like(y)
    if isinstance(model, Plasma) or (isinstance(model, Tabulated) and model.zero_freq == "plasma"):
        k = C * y / d
        root = np.sqrt(model.omega_p**2 + k * k)
        r = model.omega_p**2 / (root + k) ** 2
        return r * r
    if isinstance(model, (Drude, Tabulated)):
        return np.zeros_like(y)
    raise TypeError(f"unknown material model {model!r}")


def reflection_coeffs(model: MaterialModel, m: int, y, thermal: ThermalState, d: float) -> ReflectionCoefficients:
    """Squared reflection amplitudes at Matsubara index ``m`` and ``y = q d``.

    For m >= 1, ``p = y / (m gamma)`` and ``s = sqrt(eps - 1 + p^2)``.  The
    m = 0 TM amplitude is 1 for every model; the m = 0 TE amplitude is 1
    for the ideal metal, follows the static plasma-model form for
    plasma-like models, and vanishes for Drude-like ones.
    """
    y_arr = np.asarray(y, dtype=float)
    m = int(m)
    if m < 0:
        raise DomainError(f"Matsubara index must be >= 0, got {m}")
    if m == 0:
        if np.any(~(y_arr > 0)):
            raise DomainError("y must be > 0 for the m = 0 term")
        rho_tm = np.ones_like(y_arr)
        rho_te = _zero_mode_te(model, y_arr, d)
    else:
        lower = m * thermal.gamma(d)
        if np.any(y_arr < lower * (1 - 1e-12)):
            raise DomainError(f"y must be >= m gamma = {lower:.6g} for m = {m}")
        if isinstance(model, PerfectConductor):
            rho_tm = np.ones_like(y_arr)
            rho_te = np.ones_like(y_arr)
        else:
            eps = permittivity_at(model, thermal.matsubara(m))
            rho_tm, rho_te = _rho_positive_m(eps, y_arr / lower)
    if y_arr.ndim == 0:
        return ReflectionCoefficients(float(rho_tm), float(rho_te))
    return ReflectionCoefficients(rho_tm, rho_te)


def _mode_integrand(y, rho):
    # y^2 rho e^{-2y} / (1 - rho e^{-2y}), with 1 - rho e^{-2y} = (1 - rho) - rho expm1(-2y)
    e = np.exp(-2.0 * y)
    denom = (1.0 - rho) - rho * np.expm1(-2.0 * y)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = y * y * rho * e / denom
    return np.where(rho > 0, out, 0.0)


def _panel_edges(y_margin: float, level: int) -> np.ndarray:
    edges = [0.0, 0.25]
    while edges[-1] * 2 < y_margin:
        edges.append(edges[-1] * 2)
    edges.append(y_margin)
    edges = np.asarray(edges)
    for _ in range(level):
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mids]))
    return edges


def _sum_terms(d: float, thermal: ThermalState, model: MaterialModel, cfg: LifshitzConfig, level: int):
    """Dimensionless Matsubara sum and its quadrature error estimate, plus the last term."""
    gamma = thermal.gamma(d)
    edges = _panel_edges(cfg.y_margin, level)
    lo, hi = edges[:-1], edges[1:]

    def zero_mode(t):
        rte = _zero_mode_te(model, t, d)
        return _mode_integrand(t, np.ones_like(t)) + _mode_integrand(t, rte)

    # the m = 0 integrand vanishes like y at y = 0; nodes never hit 0 exactly
    v0, e0 = gk15_panels(zero_mode, lo, hi)
    total = 0.5 * float(np.sum(v0))
    err = 0.5 * float(np.sum(e0))
    last_term = total

    m_max = cfg.m_max(thermal)
    m_top = min(m_max, int(math.ceil(_Y_NEGLIGIBLE / gamma)))
    for start in range(1, m_top + 1, _CHUNK):
        m = np.arange(start, min(start + _CHUNK, m_top + 1), dtype=float)
        lower = (m * gamma)[:, None, None]
        if isinstance(model, PerfectConductor):
            def f(t):
                y = lower + t
                return 2.0 * _mode_integrand(y, np.ones_like(y))
        else:
            eps = np.asarray(permittivity_at(model, thermal.matsubara(m)))[:, None, None]

            def f(t):
                y = lower + t
                r_tm, r_te = _rho_positive_m(eps, y / lower)
                return _mode_integrand(y, r_tm) + _mode_integrand(y, r_te)

        vals, errs = gk15_panels(f, np.broadcast_to(lo, (len(m), len(lo))), np.broadcast_to(hi, (len(m), len(hi))))
        terms = vals.sum(axis=1)
        total += float(np.sum(terms))
        err += float(np.sum(errs))
        last_term = float(terms[-1])
    truncated = m_top == m_max and m_max < _Y_NEGLIGIBLE / gamma
    return total, err, last_term, truncated


def pressure_plane_plane(d: float, thermal: ThermalState, model: MaterialModel,
                         cfg: LifshitzConfig | None = None) -> float:
    """Magnitude of the attractive Casimir pressure between two half-spaces (Pa).

    Each y-integral uses G7/K15 on panels whose width doubles away from the
    lower limit; all panels are bisected together until the summed error
    estimate is below ``cfg.rel_tol`` times the total.

    Warns :class:`CutoffWarning` when the ``xi_max`` truncation leaves a last
    term larger than ``rel_tol`` times the sum.
    """
    cfg = cfg or LifshitzConfig()
    if not (np.isfinite(d) and d > 0):
        raise InvalidGeometry(f"gap d must be positive, got {d!r}")
    for level in range(_MAX_REFINE + 1):
        total, err, last, truncated = _sum_terms(d, thermal, model, cfg, level)
        if not math.isfinite(total):
            raise QuadratureError(f"non-finite Matsubara sum at d = {d:.4g} m")
        if err <= cfg.rel_tol * abs(total):
            break
    else:
        raise QuadratureError(
            f"Matsubara integrals did not reach rel_tol {cfg.rel_tol:g} at d = {d:.4g} m (error {err / total:.2g})"
        )
    if truncated and abs(last) > cfg.rel_tol * abs(total):
        warnings.warn(
            f"Matsubara cutoff xi_max = {cfg.xi_max:.3g} rad/s truncates a term of relative size "
            f"{abs(last / total):.2g} at d = {d:.4g} m",
            CutoffWarning,
            stacklevel=2,
        )
    return KB * thermal.T * total / (math.pi * d**3)


def ideal_pressure_zero_t(d: float) -> float:
    """pi^2 hbar c / (240 d^4): ideal metals at zero temperature."""
    return math.pi**2 * HBAR * C / (240.0 * d**4)


def classical_pressure_limit(d: float, T: float) -> float:
    """zeta(3) kB T / (4 pi d^3): ideal metals when only the m = 0 term survives."""
    zeta3 = 1.2020569031595942
    return zeta3 * KB * T / (4.0 * math.pi * d**3)


def casimir_cp_thermal(geom: CylinderPlaneGeometry, thermal: ThermalState, model: MaterialModel,
                       scheme: PfaScheme = PfaScheme.PLANE, cfg: LifshitzConfig | None = None) -> float:
    """Cylinder-plane Casimir force (N) from the Lifshitz pressure via the proximity approximation.

    ``F = 2 int_0^{pi/2} |P(d + a(1 - cos phi))| L a w(phi) dphi`` with the
    area weight ``w`` of ``scheme``; outer relative tolerance 1e-6.
    """
    if geom.theta != 0:
        raise TiltNotSupported("the thermal proximity lift assumes a parallel cylinder")
    if geom.d_over_a > PFA_WARN_D_OVER_A:
        warnings.warn(
            f"d/a = {geom.d_over_a:.3g} > {PFA_WARN_D_OVER_A}: proximity approximation error may exceed 1%",
            PfaValidityWarning,
            stacklevel=2,
        )
    cfg = cfg or LifshitzConfig()
    a, d = geom.a, geom.d

    def integrand(phi):
        gaps = d + 2.0 * a * np.sin(0.5 * phi) ** 2
        pressures = np.array([pressure_plane_plane(g, thermal, model, cfg) for g in gaps])
        return pressures * area_weight(scheme, phi)

    integral = adaptive_gk15(integrand, 0.0, math.pi / 2, rel_tol=OUTER_REL_TOL,
                             breakpoints=phi_breakpoints(geom.d_over_a))
    return 2.0 * geom.L * a * float(integral)


def normalized_ratio(geom: CylinderPlaneGeometry, thermal: ThermalState, model: MaterialModel,
                     cfg: LifshitzConfig | None = None, scheme: PfaScheme = PfaScheme.PLANE) -> float:
    """Thermal, finite-conductivity force over the ideal zero-temperature proximity force."""
    force = casimir_cp_thermal(geom, thermal, model, scheme=scheme, cfg=cfg)
    return force / casimir_force_pfa(geom, warn=False)
