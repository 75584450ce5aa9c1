"""Dielectric permittivity on the imaginary frequency axis.

Material models
---------------
``PerfectConductor``  ideal mirror; ``permittivity_at`` returns ``inf``.
``Plasma(omega_p)``    eps(i xi) = 1 + omega_p^2 / xi^2
``Drude(omega_p, nu)`` eps(i xi) = 1 + omega_p^2 / (xi (xi + nu))
``Tabulated(table, zero_freq, omega_p, nu)``
    eps(i xi) interpolated log-log from a :class:`PermittivityTable`.
    ``zero_freq`` ("plasma" or "drude") selects how the static (m = 0) limit
    is treated by :mod:`cylcasimir.lifshitz`; when ``omega_p`` is given the
    same analytic model also extends the table below its first point.

All frequencies are angular frequencies in rad/s.

Table files are UTF-8 text with ``#`` comment lines followed by two
whitespace-separated columns (``xi_rad_per_s eps`` or ``omega_rad_per_s
eps_imag``); the first column must be strictly increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import ev_to_rad_s
from .errors import InsufficientData, InvalidMaterial, OutOfRange, TailBoundExceeded
from .quadrature import adaptive_gk15

__all__ = [
    "PermittivityTable",
    "OpticalAbsorptionTable",
    "PerfectConductor",
    "Plasma",
    "Drude",
    "Tabulated",
    "MaterialModel",
    "AU_OMEGA_P",
    "AU_NU",
    "gold_plasma",
    "gold_drude",
    "permittivity_at",
    "drude_eps_imag",
    "fit_drude_absorption",
    "kk_to_imaginary_axis",
    "load_permittivity_table",
    "save_permittivity_table",
    "load_absorption_table",
    "save_absorption_table",
]

# gold: plasma frequency 9.0 eV, relaxation 35 meV
AU_OMEGA_P = ev_to_rad_s(9.0)
AU_NU = ev_to_rad_s(0.035)

MIN_KK_POINTS = 10
TAIL_FRACTION = 0.01


def _as_strictly_increasing(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(np.diff(x) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return x


@dataclass(frozen=True)
class PermittivityTable:
    """eps(i xi) sampled on an increasing imaginary-frequency grid.

    ``tail_bound`` is set by :func:`kk_to_imaginary_axis` and holds the bound
    on the part of the dispersion integral dropped above the data.
    """

    xi: np.ndarray
    eps: np.ndarray
    tail_bound: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        xi = _as_strictly_increasing(self.xi, "xi")
        eps = np.asarray(self.eps, dtype=float)
        if eps.shape != xi.shape:
            raise ValueError("xi and eps must have the same length")
        if np.any(xi <= 0):
            raise ValueError("xi must be positive")
        if not np.all(np.isfinite(eps)) or np.any(eps < 1):
            raise ValueError("eps(i xi) must be finite and >= 1")
        # tolerate round-off-level increases only
        if np.any(np.diff(eps) > 1e-12 * eps[:-1]):
            raise ValueError("eps(i xi) must be non-increasing in xi")
        xi.flags.writeable = False
        eps.flags.writeable = False
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eps", eps)

    def __len__(self):
        return len(self.xi)


@dataclass(frozen=True)
class OpticalAbsorptionTable:
    """Imaginary part eps''(omega) on an increasing real-frequency grid."""

    omega: np.ndarray
    eps_imag: np.ndarray

    def __post_init__(self):
        omega = _as_strictly_increasing(self.omega, "omega")
        eps_imag = np.asarray(self.eps_imag, dtype=float)
        if eps_imag.shape != omega.shape:
            raise ValueError("omega and eps_imag must have the same length")
        if np.any(omega <= 0):
            raise ValueError("omega must be positive")
        if not np.all(np.isfinite(eps_imag)) or np.any(eps_imag < 0):
            raise ValueError("eps_imag must be finite and >= 0")
        omega.flags.writeable = False
        eps_imag.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "eps_imag", eps_imag)

    def __len__(self):
        return len(self.omega)


@dataclass(frozen=True)
class PerfectConductor:
    pass


@dataclass(frozen=True)
class Plasma:
    omega_p: float

    def __post_init__(self):
        if not (np.isfinite(self.omega_p) and self.omega_p > 0):
            raise InvalidMaterial(f"omega_p must be positive, got {self.omega_p!r}")


@dataclass(frozen=True)
class Drude:
    omega_p: float
    nu: float

    def __post_init__(self):
        if not (np.isfinite(self.omega_p) and self.omega_p > 0):
            raise InvalidMaterial(f"omega_p must be positive, got {self.omega_p!r}")
        if not (np.isfinite(self.nu) and self.nu > 0):
            raise InvalidMaterial(f"relaxation frequency nu must be positive, got {self.nu!r}")


@dataclass(frozen=True)
class Tabulated:
    table: PermittivityTable
    zero_freq: str = "drude"
    omega_p: float | None = None
    nu: float | None = None

    def __post_init__(self):
        if self.zero_freq not in ("plasma", "drude"):
            raise InvalidMaterial(f"zero_freq must be 'plasma' or 'drude', got {self.zero_freq!r}")
        if len(self.table) < 2:
            raise InvalidMaterial("a tabulated permittivity needs at least two points")
        if self.zero_freq == "plasma" and self.omega_p is None:
            raise InvalidMaterial("plasma-like zero-frequency extrapolation needs omega_p")
        if self.omega_p is not None and not self.omega_p > 0:
            raise InvalidMaterial("omega_p must be positive")
        if self.nu is not None and not self.nu > 0:
            raise InvalidMaterial("nu must be positive")

    @property
    def low_frequency_model(self) -> Plasma | Drude | None:
        if self.omega_p is None:
            return None
        if self.zero_freq == "plasma":
            return Plasma(self.omega_p)
        if self.nu is None:
            return None
        return Drude(self.omega_p, self.nu)


MaterialModel = Union[PerfectConductor, Plasma, Drude, Tabulated]


def gold_plasma() -> Plasma:
    return Plasma(AU_OMEGA_P)


def gold_drude() -> Drude:
    return Drude(AU_OMEGA_P, AU_NU)


def permittivity_at(model: MaterialModel, xi):
    """eps(i xi) for ``xi > 0`` (scalar or array).

    Raises
    ------
    OutOfRange
        ``xi`` lies outside a tabulated grid and the model has no analytic
        extension there.
    """
    xi_arr = np.asarray(xi, dtype=float)
    if np.any(~(xi_arr > 0)):
        raise OutOfRange("permittivity is only evaluated at xi > 0")
    if isinstance(model, PerfectConductor):
        out = np.full_like(xi_arr, np.inf)
    elif isinstance(model, Plasma):
        out = 1.0 + (model.omega_p / xi_arr) ** 2
    elif isinstance(model, Drude):
        out = 1.0 + model.omega_p**2 / (xi_arr * (xi_arr + model.nu))
    elif isinstance(model, Tabulated):
        out = _interp_table(model, xi_arr)
    else:
        raise InvalidMaterial(f"unknown material model {model!r}")
    return out if out.ndim else float(out)


def _interp_table(model: Tabulated, xi: np.ndarray) -> np.ndarray:
    table = model.table
    lo, hi = table.xi[0], table.xi[-1]
    if np.any(xi > hi * (1 + 1e-12)):
        raise OutOfRange(f"xi = {xi.max():.4g} rad/s is above the tabulated range (max {hi:.4g})")
    below = xi < lo * (1 - 1e-12)
    extension = model.low_frequency_model
    if np.any(below) and extension is None:
        raise OutOfRange(
            f"xi = {xi.min():.4g} rad/s is below the tabulated range (min {lo:.4g}) "
            "and no analytic low-frequency model is configured"
        )
    log_eps = np.interp(np.log(np.clip(xi, lo, hi)), np.log(table.xi), np.log(table.eps))
    out = np.exp(log_eps)
    if np.any(below):
        out = np.where(below, permittivity_at(extension, np.where(below, xi, lo)), out)
    return out


def drude_eps_imag(omega, omega_p: float, nu: float):
    """Imaginary part of the Drude permittivity on the real axis."""
    omega = np.asarray(omega, dtype=float)
    return omega_p**2 * nu / (omega * (omega**2 + nu**2))


def fit_drude_absorption(omega, eps_imag) -> tuple[float, float]:
    """Fit ``(omega_p, nu)`` of the Drude absorption to the given points.

    Least squares in log(eps''); for fixed nu the amplitude omega_p^2 nu is
    linear in the log, leaving a bounded 1-D search over log(nu).
    """
    omega = np.asarray(omega, dtype=float)
    eps_imag = np.asarray(eps_imag, dtype=float)
    keep = eps_imag > 0
    if keep.sum() < 2:
        raise InsufficientData("Drude fit needs at least two points with eps'' > 0")
    omega, log_e = omega[keep], np.log(eps_imag[keep])
    log_w = np.log(omega)

    def residual(log_nu):
        shape = -log_w - np.log(omega**2 + math.exp(2 * log_nu))
        log_amp = np.mean(log_e - shape)
        return log_amp, np.sum((log_e - shape - log_amp) ** 2)

    centre = math.log(omega[0])
    res = minimize_scalar(lambda u: residual(u)[1], bounds=(centre - 12, centre + 12),
                          method="bounded", options={"xatol": 1e-10})
    log_nu = float(res.x)
    log_amp, _ = residual(log_nu)
    nu = math.exp(log_nu)
    omega_p = math.sqrt(math.exp(log_amp) / nu)
    return omega_p, nu


def _low_frequency_integral(omega0: float, omega_p: float, nu: float, xi: float) -> float:
    """(2/pi) int_0^omega0 omega eps''_Drude / (omega^2 + xi^2) d omega."""
    amp = omega_p**2 * nu
    if abs(xi - nu) > 1e-3 * nu:
        val = (math.atan(omega0 / nu) / nu - math.atan(omega0 / xi) / xi) / (xi**2 - nu**2)
    else:
        val = float(adaptive_gk15(lambda w: 1.0 / ((w**2 + nu**2) * (w**2 + xi**2)), 0.0, omega0,
                                  rel_tol=1e-12))
    return 2.0 / math.pi * amp * val


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def kk_to_imaginary_axis(absorption: OpticalAbsorptionTable, xi_grid) -> PermittivityTable:
    """Dispersion relation eps(i xi) = 1 + (2/pi) int_0^inf omega eps''(omega)/(omega^2 + xi^2) d omega.

    Between the tabulated points eps'' is interpolated log-log (linearly where
    a value is zero) and integrated with 8-point Gauss-Legendre in log(omega)
    per segment.  Below the first point eps'' is continued by a Drude form
    fitted to the lowest decade of data, integrated in closed form.  Above
    the last point the integral is truncated; the dropped part is bounded by
    assuming eps'' keeps falling at least as fast as 1/omega, and the bound is
    stored in ``tail_bound`` of the result.

    Raises
    ------
    InsufficientData
        Fewer than 10 absorption points.
    TailBoundExceeded
        The truncation bound exceeds 1% of eps(i xi) - 1 at some xi.
    """
    if len(absorption) < MIN_KK_POINTS:
        raise InsufficientData(f"need at least {MIN_KK_POINTS} absorption points, got {len(absorption)}")
    xi = _as_strictly_increasing(xi_grid, "xi_grid")
    if np.any(xi <= 0):
        raise ValueError("xi_grid must be positive")
    w = absorption.omega
    e = absorption.eps_imag

    # tabulated part, integrated in u = ln(omega)
    u0, u1 = np.log(w[:-1]), np.log(w[1:])
    e0, e1 = e[:-1], e[1:]
    half = 0.5 * (u1 - u0)
    u = 0.5 * (u1 + u0)[:, None] + half[:, None] * _GL_X[None, :]
    t = (u - u0[:, None]) / (u1 - u0)[:, None]
    both = (e0 > 0) & (e1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        loglog = np.exp(np.log(np.where(both, e0, 1.0))[:, None]
                        + t * np.log(np.where(both, e1 / np.where(both, e0, 1.0), 1.0))[:, None])
    lin = e0[:, None] + t * (e1 - e0)[:, None]
    e_nodes = np.where(both[:, None], loglog, lin)
    om2 = np.exp(2.0 * u)
    weights = half[:, None] * _GL_W[None, :]
    # shape (n_xi, segments, nodes)
    integrand = om2[None] * e_nodes[None] / (om2[None] + xi[:, None, None] ** 2)
    body = 2.0 / math.pi * np.einsum("kij,ij->k", integrand, weights)

    # Drude continuation below the data
    low = np.zeros_like(xi)
    decade = w <= 10.0 * w[0]
    if decade.sum() < 3:
        decade = np.arange(len(w)) < 3
    if np.any(e[decade] > 0):
        omega_p, nu = fit_drude_absorption(w[decade], e[decade])
        low = np.array([_low_frequency_integral(w[0], omega_p, nu, x) for x in xi])

    # truncation bound above the data: int_wmax^inf eps''/omega, eps'' ~ omega^s, s <= -1
    top = w >= w[-1] / 10.0
    if top.sum() < 2:
        top = np.arange(len(w)) >= len(w) - 2
    e_top = e[top]
    if e[-1] > 0 and np.all(e_top > 0):
        slope = np.polyfit(np.log(w[top]), np.log(e_top), 1)[0]
    else:
        slope = -1.0
    tail = np.full_like(xi, 2.0 / math.pi * e[-1] / max(-slope, 1.0))

    eps = 1.0 + body + low
    bad = tail > TAIL_FRACTION * (eps - 1.0)
    if np.any(bad & (tail > 0)):
        k = int(np.argmax(bad))
        raise TailBoundExceeded(
            f"high-frequency truncation bound {tail[k]:.3g} exceeds {TAIL_FRACTION:.0%} of "
            f"eps - 1 = {eps[k] - 1:.3g} at xi = {xi[k]:.4g} rad/s; extend the absorption data"
        )
    # the transform is monotone in xi; remove round-off-level wiggles
    eps = np.minimum.accumulate(eps)
    return PermittivityTable(xi=xi, eps=eps, tail_bound=tail)


def _load_two_column(path, names: tuple[str, str]) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected two columns ({' '.join(names)}), got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: non-numeric value in {line!r}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    arr = np.array(rows)
    bad = np.nonzero(np.diff(arr[:, 0]) <= 0)[0]
    if bad.size:
        raise ValueError(f"{path}: first column not strictly increasing at data row {bad[0] + 2}")
    return arr[:, 0], arr[:, 1]


def _save_two_column(path, x, y, header: str) -> None:
    lines = [f"# {line}" for line in header.splitlines()]
    lines += [f"{a:.17g} {b:.17g}" for a, b in zip(x, y)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_permittivity_table(path) -> PermittivityTable:
    xi, eps = _load_two_column(path, ("xi_rad_per_s", "eps"))
    return PermittivityTable(xi, eps)


def save_permittivity_table(path, table: PermittivityTable, comment: str = "") -> None:
    header = (comment + "\n" if comment else "") + "xi_rad_per_s eps"
    _save_two_column(path, table.xi, table.eps, header)


def load_absorption_table(path) -> OpticalAbsorptionTable:
    omega, eps_imag = _load_two_column(path, ("omega_rad_per_s", "eps_imag"))
    return OpticalAbsorptionTable(omega, eps_imag)


def save_absorption_table(path, table: OpticalAbsorptionTable, comment: str = "") -> None:
    header = (comment + "\n" if comment else "") + "omega_rad_per_s eps_imag"
    _save_two_column(path, table.omega, table.eps_imag, header)
