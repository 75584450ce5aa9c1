"""Closed-form force laws for the cylinder-plane geometry.

Sign convention: every force returned here is the *magnitude* of an
attractive force, in newtons.  Gradients handed to the resonator model in
:mod:`cylcasimir.calibration` use the signed force instead (see there).

The plane-plane and sphere-plane baselines are included for comparison.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C, EPS0, HBAR
from .errors import ContactError, ConvergenceError, InvalidGeometry, PfaValidityWarning, TiltNotSupported

__all__ = [
    "CylinderPlaneGeometry",
    "PlanePlane",
    "SpherePlane",
    "electrostatic_force_exact",
    "electrostatic_force_pfa",
    "nonparallel_factor_el",
    "casimir_force_pfa",
    "nonparallel_factor_cas",
    "baseline_force",
    "equivalent_voltage",
    "SERIES_SWITCH_ALPHA",
    "PFA_WARN_D_OVER_A",
]

SERIES_SWITCH_ALPHA = 1e-4
PFA_WARN_D_OVER_A = 0.2


@dataclass(frozen=True)
class CylinderPlaneGeometry:
    """Cylinder of radius ``a`` and length ``L`` at mean gap ``d``, tilted by ``theta``.

    All lengths in metres, ``theta`` in radians.  The gap is measured from
    the plane to the cylinder surface at the cylinder midpoint.
    """

    a: float
    L: float
    d: float
    theta: float = 0.0

    def __post_init__(self):
        for name in ("a", "L", "d"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidGeometry(f"{name} must be positive and finite, got {value!r}")
        if not np.isfinite(self.theta):
            raise InvalidGeometry(f"theta must be finite, got {self.theta!r}")
        if abs(self.alpha) >= 1:
            raise ContactError(
                f"non-parallelism alpha = L sin(theta)/(2d) = {self.alpha:.6g}: the cylinder touches the plane"
            )

    @property
    def alpha(self) -> float:
        return self.L * math.sin(self.theta) / (2.0 * self.d)

    @property
    def d_over_a(self) -> float:
        return self.d / self.a

    def with_gap(self, d: float) -> "CylinderPlaneGeometry":
        return CylinderPlaneGeometry(self.a, self.L, d, self.theta)


@dataclass(frozen=True)
class PlanePlane:
    A: float

    def __post_init__(self):
        if not (np.isfinite(self.A) and self.A > 0):
            raise InvalidGeometry(f"plate area A must be positive, got {self.A!r}")


@dataclass(frozen=True)
class SpherePlane:
    R: float

    def __post_init__(self):
        if not (np.isfinite(self.R) and self.R > 0):
            raise InvalidGeometry(f"sphere radius R must be positive, got {self.R!r}")


def _check_gap(d: float) -> None:
    if not (np.isfinite(d) and d > 0):
        raise InvalidGeometry(f"gap d must be positive and finite, got {d!r}")


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not abs(alpha) < 1:
        raise ContactError(f"|alpha| must be < 1, got {alpha!r}")
    return alpha


def electrostatic_force_exact(geom: CylinderPlaneGeometry, v0: float) -> float:
    """Exact force between a parallel conducting cylinder and a grounded plane.

    Uses the image-line solution, written as ``pi eps0 L V0^2 / (Delta
    arccosh^2(h/a))`` with ``h = d + a`` and ``Delta = sqrt(h^2 - a^2)``.
    ``arccosh(1 + d/a)`` is evaluated through ``log1p`` so that the result
    keeps full precision for d/a down to ~1e-12.
    """
    if geom.theta != 0:
        raise TiltNotSupported("the exact electrostatic force is only known for theta = 0")
    a, d = geom.a, geom.d
    x = d / a
    acosh = math.log1p(x + math.sqrt(x * (x + 2.0)))
    delta = math.sqrt(d * (d + 2.0 * a))
    return math.pi * EPS0 * geom.L * v0**2 / (delta * acosh**2)


def nonparallel_factor_el(alpha: float) -> float:
    """Tilt correction to the proximity electrostatic force (even in alpha, >= 1)."""
    alpha = abs(_check_alpha(alpha))
    if alpha < SERIES_SWITCH_ALPHA:
        return 1.0 + 0.625 * alpha**2
    return (1.0 / math.sqrt(1.0 - alpha) - 1.0 / math.sqrt(1.0 + alpha)) / alpha


def nonparallel_factor_cas(alpha: float) -> float:
    """Tilt correction to the proximity Casimir force (even in alpha, >= 1)."""
    alpha = abs(_check_alpha(alpha))
    if alpha < SERIES_SWITCH_ALPHA:
        return 1.0 + 2.625 * alpha**2
    return ((1.0 - alpha) ** -2.5 - (1.0 + alpha) ** -2.5) / (5.0 * alpha)


def electrostatic_force_pfa(geom: CylinderPlaneGeometry, v0: float) -> float:
    """Leading proximity electrostatic force, including the tilt factor."""
    f0 = math.pi * EPS0 * math.sqrt(geom.a) * geom.L * v0**2 / (2.0 * math.sqrt(2.0) * geom.d**1.5)
    return f0 * nonparallel_factor_el(geom.alpha)


def casimir_force_pfa(geom: CylinderPlaneGeometry, warn: bool = True) -> float:
    """Ideal-metal, zero-temperature Casimir force in the proximity limit.

    Emits :class:`PfaValidityWarning` when d/a exceeds 0.2.
    """
    if warn and geom.d_over_a > PFA_WARN_D_OVER_A:
        warnings.warn(
            f"d/a = {geom.d_over_a:.3g} > {PFA_WARN_D_OVER_A}: proximity approximation error may exceed 1%",
            PfaValidityWarning,
            stacklevel=2,
        )
    f0 = math.pi**3 * HBAR * C * geom.L * math.sqrt(geom.a) / (384.0 * math.sqrt(2.0) * geom.d**3.5)
    return f0 * nonparallel_factor_cas(geom.alpha)


def _sphere_plane_electrostatic(R: float, d: float, v0: float, rel_tol: float = 1e-12,
                                max_terms: int = 1_000_000) -> float:
    u = math.acosh(1.0 + d / R)
    coth_u = 1.0 / math.tanh(u)
    total = 0.0
    for n in range(1, max_terms + 1):
        nu = n * u
        if nu > 700:
            # coth(nu) == 1 and 1/sinh(nu) underflows: the rest is zero
            return 2.0 * math.pi * EPS0 * v0**2 * abs(total)
        term = (coth_u - n / math.tanh(nu)) / math.sinh(nu)
        total += term
        if abs(term) < rel_tol * abs(total):
            # every term is <= 0 (n = 1 vanishes); the force magnitude is |sum|
            return 2.0 * math.pi * EPS0 * v0**2 * abs(total)
    raise ConvergenceError(
        f"sphere-plane series did not converge in {max_terms} terms (d/R = {d / R:.3g} too small)"
    )


def baseline_force(geom: PlanePlane | SpherePlane, kind: str, d: float, v0: float = 0.0) -> float:
    """Force for the plane-plane or sphere-plane comparison configurations.

    Parameters
    ----------
    geom : PlanePlane or SpherePlane
    kind : {"electrostatic", "casimir"}
        ``"casimir"`` is the ideal-metal, zero-temperature force (proximity
        approximation for the sphere).
    d : float
        Gap in metres.
    v0 : float
        Bias voltage, used for ``kind="electrostatic"`` only.
    """
    _check_gap(d)
    kind = kind.lower()
    if kind not in ("electrostatic", "casimir"):
        raise ValueError(f"kind must be 'electrostatic' or 'casimir', got {kind!r}")
    if isinstance(geom, PlanePlane):
        if kind == "electrostatic":
            return EPS0 * geom.A * v0**2 / (2.0 * d**2)
        return math.pi**2 * HBAR * C * geom.A / (240.0 * d**4)
    if isinstance(geom, SpherePlane):
        if kind == "electrostatic":
            if v0 == 0:
                return 0.0
            return _sphere_plane_electrostatic(geom.R, d, v0)
        return math.pi**3 * HBAR * C * geom.R / (360.0 * d**3)
    raise TypeError(f"unsupported comparison geometry {geom!r}")


def equivalent_voltage(d: float) -> float:
    """Bias voltage whose proximity electrostatic force equals the ideal Casimir force at gap ``d``.

    Independent of the cylinder radius and length.
    """
    _check_gap(d)
    return math.sqrt(math.pi**2 * HBAR * C / (192.0 * EPS0)) / d
