"""Proximity-force integrals for the parallel cylinder-plane configuration.

The cylinder surface is parameterised by the angle ``phi`` measured from the
point of closest approach, so the local gap is ``d + a (1 - cos phi)``.  Only
``phi`` in ``[0, pi/2]`` is integrated; the symmetric half of the cylinder is
folded into the prefactors, which are therefore twice the plane-plane
pressure coefficients (``eps0 V^2 / a^2`` instead of ``eps0 V^2 / 2 a^2`` and
``pi^2 hbar c / 120 a^4`` instead of ``/240``).

Three effective-area elements are supported (:class:`PfaScheme`): the
projection onto the plane ``L a cos(phi) dphi``, the cylinder surface itself
``L a dphi`` and their geometric mean ``L a sqrt(cos phi) dphi``.  They agree
at leading order in ``d/a`` and differ by ``eta * d/a`` at the next order.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import C, EPS0, HBAR
from .core_model import CylinderPlaneGeometry, electrostatic_force_exact, electrostatic_force_pfa
from .errors import InvalidGeometry, TiltNotSupported
from .quadrature import adaptive_gk15

__all__ = [
    "PfaScheme",
    "Interaction",
    "PfaResult",
    "EtaCoefficient",
    "area_weight",
    "pfa_force",
    "pfa_ratio",
    "eta_estimate",
    "eta_table",
    "exact_pfa_ratio",
    "phi_breakpoints",
    "REFERENCE_ETA",
]


class PfaScheme(str, enum.Enum):
    PLANE = "plane"
    CYLINDER = "cylinder"
    GEOMETRIC_MEAN = "geometric_mean"


class Interaction(str, enum.Enum):
    ELECTROSTATIC = "electrostatic"
    CASIMIR = "casimir"


# analytic subleading coefficients, for comparison tables
REFERENCE_ETA = {
    (PfaScheme.PLANE, Interaction.ELECTROSTATIC): -0.75,
    (PfaScheme.CYLINDER, Interaction.ELECTROSTATIC): 0.25,
    (PfaScheme.GEOMETRIC_MEAN, Interaction.ELECTROSTATIC): -0.25,
    (PfaScheme.PLANE, Interaction.CASIMIR): -0.15,
    (PfaScheme.CYLINDER, Interaction.CASIMIR): 0.05,
    (PfaScheme.GEOMETRIC_MEAN, Interaction.CASIMIR): -0.05,
}

_POWER = {Interaction.ELECTROSTATIC: 2, Interaction.CASIMIR: 4}
# ratio_to_leading = _LEADING_NORM * x**(power - 1/2) * integral, x = d/a
_LEADING_NORM = {
    Interaction.ELECTROSTATIC: 2.0 * math.sqrt(2.0) / math.pi,
    Interaction.CASIMIR: 16.0 * math.sqrt(2.0) / (5.0 * math.pi),
}

# leading correction exponents of (ratio - 1)/x as x -> 0
_SLOPE_POWERS = {
    Interaction.ELECTROSTATIC: (0.5, 1.0),
    Interaction.CASIMIR: (1.0, 2.0),
}

REL_TOL = 1e-10
MAX_INTERVALS = 10_000
ETA_STEPS = (1e-3, 5e-4, 2.5e-4)


@dataclass(frozen=True)
class PfaResult:
    force: float
    ratio_to_leading: float
    d_over_a: float


@dataclass(frozen=True)
class EtaCoefficient:
    value: float
    scheme: PfaScheme
    interaction: Interaction
    est_error: float


def area_weight(scheme: PfaScheme, phi):
    """Area element per ``L a dphi`` for the given scheme."""
    scheme = PfaScheme(scheme)
    cos_phi = np.clip(np.cos(phi), 0.0, None)
    if scheme is PfaScheme.PLANE:
        return cos_phi
    if scheme is PfaScheme.CYLINDER:
        return np.ones_like(cos_phi)
    return np.sqrt(cos_phi)


def phi_breakpoints(d_over_a: float) -> list[float]:
    """Initial partition of [0, pi/2] geometric in the peak width sqrt(2 d/a)."""
    width = math.sqrt(2.0 * d_over_a)
    points = []
    p = width / 4
    while p < math.pi / 2:
        points.append(p)
        p *= 2
    return points


def _dimensionless_integral(x: float, scheme: PfaScheme, power: int,
                            rel_tol: float = REL_TOL, max_intervals: int = MAX_INTERVALS) -> float:
    # 1 - cos(phi) = 2 sin^2(phi/2) avoids cancellation near phi = 0
    def integrand(phi):
        return area_weight(scheme, phi) / (x + 2.0 * np.sin(0.5 * phi) ** 2) ** power

    return adaptive_gk15(integrand, 0.0, math.pi / 2, rel_tol=rel_tol,
                         max_intervals=max_intervals, breakpoints=phi_breakpoints(x))


def _check_d_over_a(x: float) -> float:
    x = float(x)
    if not (0 < x <= 10):
        raise InvalidGeometry(f"d/a must lie in (0, 10], got {x!r}")
    return x


def pfa_ratio(d_over_a: float, scheme: PfaScheme, interaction: Interaction) -> float:
    """Proximity force for ``scheme`` divided by the leading-order closed form."""
    x = _check_d_over_a(d_over_a)
    interaction = Interaction(interaction)
    power = _POWER[interaction]
    integral = _dimensionless_integral(x, PfaScheme(scheme), power)
    return _LEADING_NORM[interaction] * x ** (power - 0.5) * float(integral)


def pfa_force(geom: CylinderPlaneGeometry, scheme: PfaScheme, interaction: Interaction,
              v0: float | None = None) -> PfaResult:
    """Proximity-force integral for one effective-area prescription.

    ``v0`` (volts) is required for the electrostatic interaction.  The
    Casimir interaction is the ideal-metal, zero-temperature one.
    """
    if geom.theta != 0:
        raise TiltNotSupported("proximity integrals over phi assume a parallel cylinder")
    interaction = Interaction(interaction)
    x = _check_d_over_a(geom.d_over_a)
    power = _POWER[interaction]
    integral = float(_dimensionless_integral(x, PfaScheme(scheme), power))
    a, L = geom.a, geom.L
    if interaction is Interaction.ELECTROSTATIC:
        if v0 is None:
            raise ValueError("electrostatic interaction requires v0")
        prefactor = EPS0 * v0**2 / a**2
    else:
        prefactor = math.pi**2 * HBAR * C / (120.0 * a**4)
    # the integral is over dA / (a^power (x + 1 - cos phi)^power) with dA = L a w dphi
    force = prefactor * L * a * integral
    ratio = _LEADING_NORM[interaction] * x ** (power - 0.5) * integral
    return PfaResult(force=force, ratio_to_leading=ratio, d_over_a=x)


def eta_estimate(scheme: PfaScheme, interaction: Interaction, steps=ETA_STEPS,
                 parallel: bool = False) -> EtaCoefficient:
    """Subleading coefficient ``eta`` in ``F/F0 = 1 + eta d/a + ...``.

    The slope ``(ratio - 1)/x`` is evaluated at three values of x and
    Richardson-extrapolated to x = 0 by eliminating its two leading
    corrections.  For the Casimir integrand these are O(x) and O(x^2); the
    electrostatic one decays slowly enough away from phi = 0 that the far
    region adds an O(x^(3/2)) term to the ratio, so its slope corrections are
    O(x^(1/2)) and O(x).  ``est_error`` is the change made by the last
    elimination step.
    """
    scheme = PfaScheme(scheme)
    interaction = Interaction(interaction)
    steps = np.asarray([float(s) for s in steps])
    if steps.shape != (3,) or not (steps[0] > steps[1] > steps[2] > 0):
        raise ValueError("steps must be three decreasing positive values")
    if parallel:
        with ThreadPoolExecutor(max_workers=3) as pool:
            ratios = list(pool.map(lambda s: pfa_ratio(s, scheme, interaction), steps))
    else:
        ratios = [pfa_ratio(s, scheme, interaction) for s in steps]
    slopes = (np.asarray(ratios) - 1.0) / steps
    powers = _SLOPE_POWERS[interaction]
    full = np.linalg.solve(np.column_stack([np.ones(3), steps ** powers[0], steps ** powers[1]]), slopes)[0]
    two = np.linalg.solve(np.column_stack([np.ones(2), steps[1:] ** powers[0]]), slopes[1:])[0]
    return EtaCoefficient(value=float(full), scheme=scheme, interaction=interaction,
                          est_error=float(abs(full - two)))


def eta_table() -> list[EtaCoefficient]:
    """All six (scheme, interaction) coefficients, electrostatic first."""
    return [eta_estimate(s, i) for i in Interaction for s in PfaScheme]


def exact_pfa_ratio(d_over_a: float) -> float:
    """Exact parallel cylinder-plane electrostatic force over its leading proximity value."""
    x = float(d_over_a)
    if not (np.isfinite(x) and x > 0):
        raise InvalidGeometry(f"d/a must be positive, got {d_over_a!r}")
    geom = CylinderPlaneGeometry(a=1.0, L=1.0, d=x)
    return electrostatic_force_exact(geom, 1.0) / electrostatic_force_pfa(geom, 1.0)
