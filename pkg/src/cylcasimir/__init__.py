"""Casimir and electrostatic forces in the cylinder-plane geometry.

Submodules
----------
core_model   closed-form forces, tilt corrections, equivalent voltage
pfa          proximity-force integrals and their subleading coefficients
dielectric   permittivity models on the imaginary axis, dispersion transform
lifshitz     finite-temperature Lifshitz pressure and the cylinder lift
calibration  resonator frequency shifts and calibration fits
cli          command-line front end
"""

__version__ = "0.1.0"

from .core_model import (  # noqa: E402
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
from .dielectric import (  # noqa: E402
    Drude,
    PerfectConductor,
    Plasma,
    Tabulated,
    gold_drude,
    gold_plasma,
    permittivity_at,
)
from .lifshitz import (  # noqa: E402
    LifshitzConfig,
    ThermalState,
    casimir_cp_thermal,
    normalized_ratio,
    pressure_plane_plane,
)
from .pfa import Interaction, PfaScheme, eta_estimate, exact_pfa_ratio, pfa_force  # noqa: E402

__all__ = [
    "__version__",
    "CylinderPlaneGeometry",
    "PlanePlane",
    "SpherePlane",
    "baseline_force",
    "casimir_force_pfa",
    "electrostatic_force_exact",
    "electrostatic_force_pfa",
    "equivalent_voltage",
    "nonparallel_factor_cas",
    "nonparallel_factor_el",
    "Drude",
    "PerfectConductor",
    "Plasma",
    "Tabulated",
    "gold_drude",
    "gold_plasma",
    "permittivity_at",
    "LifshitzConfig",
    "ThermalState",
    "casimir_cp_thermal",
    "normalized_ratio",
    "pressure_plane_plane",
    "Interaction",
    "PfaScheme",
    "eta_estimate",
    "exact_pfa_ratio",
    "pfa_force",
]
