"""From absorption data to eps(i xi), the input of the Lifshitz formula.

Real optical data only gives eps'' on a finite real-frequency window.  Here
we fake such a table from a Drude metal plus one interband-like oscillator,
transform it to the imaginary axis and compare with the analytic answer.
The transformed table is then used as a material in the pressure calculation.

Run:  python3 demos/03_permittivity_from_absorption.py
"""

import numpy as np

from cylcasimir.dielectric import (
    AU_NU,
    AU_OMEGA_P,
    Drude,
    OpticalAbsorptionTable,
    Tabulated,
    drude_eps_imag,
    kk_to_imaginary_axis,
    permittivity_at,
)
from cylcasimir.lifshitz import ThermalState, pressure_plane_plane

w = np.geomspace(1e12, 1e19, 4000)
wp2, w0, g = 4e31, 4e15, 1e15  # oscillator strength, position and width
eps_imag = drude_eps_imag(w, AU_OMEGA_P, AU_NU) + wp2 * g * w / ((w0**2 - w**2) ** 2 + (g * w) ** 2)

xi = np.geomspace(1e13, 2e17, 200)
table = kk_to_imaginary_axis(OpticalAbsorptionTable(w, eps_imag), xi)
exact = permittivity_at(Drude(AU_OMEGA_P, AU_NU), xi) + wp2 / (w0**2 + xi**2 + g * xi)

print("xi (rad/s)   eps(i xi) from data   analytic     rel. diff")
for i in range(0, len(xi), 25):
    print(f"{xi[i]:.3e}    {table.eps[i]:.6e}          {exact[i]:.6e}  {table.eps[i] / exact[i] - 1:+.1e}")
print(f"largest truncation bound above the data: {table.tail_bound.max():.2e}")

material = Tabulated(table, zero_freq="drude", omega_p=AU_OMEGA_P, nu=AU_NU)
th = ThermalState(300.0)
for d in (0.5e-6, 1e-6, 3e-6):
    p_tab = pressure_plane_plane(d, th, material)
    p_drude = pressure_plane_plane(d, th, Drude(AU_OMEGA_P, AU_NU))
    print(f"d = {d * 1e6:.1f} um: P(table) = {p_tab:.4e} Pa, P(pure Drude) = {p_drude:.4e} Pa")
