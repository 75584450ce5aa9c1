"""How good is the proximity approximation for a charged cylinder over a plate?

The image-line solution gives the exact force for a parallel cylinder, so we
can watch the proximity law drift away from it as the gap grows relative to
the radius, and see what a small tilt does to both forces.

Run:  python3 demos/01_exact_vs_proximity.py
"""

import numpy as np
from scipy.optimize import brentq

from cylcasimir import (
    CylinderPlaneGeometry,
    casimir_force_pfa,
    electrostatic_force_exact,
    electrostatic_force_pfa,
    equivalent_voltage,
    nonparallel_factor_cas,
    nonparallel_factor_el,
)

a, L = 0.51, 1e-2  # a gently curved, centimetre-long cylinder


def ratio(x):
    geom = CylinderPlaneGeometry(1.0, 1.0, x)
    return electrostatic_force_exact(geom, 1.0) / electrostatic_force_pfa(geom, 1.0)


print("d/a        exact/PFA")
for x in (1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5):
    print(f"{x:<10g} {ratio(x):.6f}")

# a polynomial fit of the small-gap deviation
x = np.geomspace(1e-4, 1e-2, 40)
c1, c2 = np.linalg.lstsq(np.column_stack([x, x * x]), [ratio(v) - 1 for v in x], rcond=None)[0]
print(f"\nexact/PFA - 1 ~ {c1:.4f} d/a + {c2:.4f} (d/a)^2")
print(f"the proximity law is 1% off once d/a reaches {brentq(lambda v: ratio(v) - 0.99, 1e-3, 1):.3f}")

# Tilt: both forces grow, the Casimir force faster because it is steeper in d.
print("\nalpha   electrostatic  Casimir")
for alpha in (0.0, 0.05, 0.1, 0.2, 0.4):
    print(f"{alpha:<7g} {nonparallel_factor_el(alpha):.6f}       {nonparallel_factor_cas(alpha):.6f}")

# The bias that mimics the Casimir force sets how well stray potentials must be nulled.
for d in (1e-6, 2e-6, 3e-6):
    geom = CylinderPlaneGeometry(a, L, d)
    v = equivalent_voltage(d)
    print(f"\nd = {d * 1e6:.0f} um: V_eq = {v * 1e3:.3f} mV, "
          f"F_cas = {casimir_force_pfa(geom):.3e} N, F_el(V_eq) = {electrostatic_force_pfa(geom, v):.3e} N")
