"""Thermal Casimir force on the cylinder for two descriptions of gold.

The plasma and Drude descriptions differ only in how they treat the
zero-frequency transverse-electric mode, but at a few microns that mode is
a large part of the thermal force.  The script sweeps the gap at room
temperature and then the temperature at 3 um, printing the force divided
by the ideal-metal, zero-temperature proximity force.

Run:  python3 demos/04_thermal_casimir_cylinder.py
"""

import time

import numpy as np

from cylcasimir import CylinderPlaneGeometry, ThermalState, gold_drude, gold_plasma, normalized_ratio

a, L = 0.51, 1e-2
plasma, drude = gold_plasma(), gold_drude()

t0 = time.perf_counter()
print("d (um)   plasma   Drude")
for d in np.linspace(1e-6, 5e-6, 9):
    geom, th = CylinderPlaneGeometry(a, L, d), ThermalState(300.0)
    print(f"{d * 1e6:5.2f}    {normalized_ratio(geom, th, plasma):.4f}   {normalized_ratio(geom, th, drude):.4f}")

print("\nT (K)     plasma   Drude    plasma/Drude   at d = 3 um")
geom = CylinderPlaneGeometry(a, L, 3e-6)
for T in (253.15, 273.15, 293.15, 313.15, 333.15):
    th = ThermalState(T)
    p, dr = normalized_ratio(geom, th, plasma), normalized_ratio(geom, th, drude)
    print(f"{T:<9g} {p:.4f}   {dr:.4f}   {p / dr:.3f}")
print(f"\n({time.perf_counter() - t0:.1f} s)")
