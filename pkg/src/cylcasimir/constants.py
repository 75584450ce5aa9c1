"""CODATA physical constants (SI) and unit helpers.

Values come from :mod:`scipy.constants` and are exposed as module-level
floats plus a frozen :class:`PhysicalConstants` record.
"""

from __future__ import annotations

from dataclasses import dataclass

from scipy import constants as _sc

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "EPS0",
    "HBAR",
    "C",
    "KB",
    "EV_TO_RAD_S",
    "ev_to_rad_s",
]


@dataclass(frozen=True)
class PhysicalConstants:
    eps0: float = _sc.epsilon_0
    hbar: float = _sc.hbar
    c: float = _sc.c
    kB: float = _sc.k


CONSTANTS = PhysicalConstants()

EPS0 = CONSTANTS.eps0
HBAR = CONSTANTS.hbar
C = CONSTANTS.c
KB = CONSTANTS.kB

# angular frequency (rad/s) corresponding to 1 eV of photon energy
EV_TO_RAD_S = _sc.e / _sc.hbar


def ev_to_rad_s(energy_ev: float) -> float:
    """Convert a photon energy in eV to an angular frequency in rad/s."""
    return energy_ev * EV_TO_RAD_S
