"""Command-line front end producing self-describing CSV files.

Subcommands: ``force-table``, ``lifshitz-ratio``, ``pfa-compare``, ``eta``,
``calibrate {parabola,powerlaw,lorentzian,parallelism}`` and ``synth``.

Every option can also come from ``--config FILE`` holding ``key = value``
lines (SI units, keys spelled like the long options with ``-`` or ``_``);
command-line flags override the file and unknown keys are an error.

Exit status: 0 on success, 1 on usage or input errors, 2 on numerical
failures.
"""

from __future__ import annotations

import argparse
import io
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import (
    MODELS,
    ActuatorModel,
    fit_gap_powerlaw,
    fit_lorentzian,
    fit_parabola,
    load_calibration_file,
    parallelism_from_parabola,
    save_calibration_file,
    synth_dataset,
)
from .core_model import (
    CylinderPlaneGeometry,
    PlanePlane,
    SpherePlane,
    baseline_force,
    casimir_force_pfa,
    electrostatic_force_pfa,
)
from .dielectric import AU_NU, AU_OMEGA_P, Drude, PerfectConductor, Plasma, Tabulated, load_permittivity_table
from .errors import CasimirError, NumericalError
from .lifshitz import LifshitzConfig, ThermalState, normalized_ratio
from .pfa import REFERENCE_ETA, Interaction, PfaScheme, eta_estimate, exact_pfa_ratio, pfa_ratio

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

_SYNTH_UNITS = {"parabola": ("V", "Hz"), "powerlaw": ("V", "Hz2/V2"), "lorentzian": ("Hz", "arb")}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(value) -> str:
    return format(float(value), ".17g")


def _grid(lo: float, hi: float, n: int, log: bool) -> np.ndarray:
    if n < 1:
        raise UsageError("--points must be >= 1")
    if not (lo > 0 or not log) or hi < lo:
        raise UsageError(f"invalid grid [{lo}, {hi}]")
    if n == 1:
        return np.array([lo])
    return np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)


def _write_csv(args, columns: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# cylcasimir {__version__} {args.command}\n")
    for key in sorted(vars(args)):
        if key in ("func", "command", "out", "config"):
            continue
        buf.write(f"# {key} = {getattr(args, key)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    _emit(args, buf.getvalue())


def _emit(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# commands


def cmd_force_table(args) -> None:
    ds = _grid(args.d_min, args.d_max, args.points, log=True)
    pp, sp = PlanePlane(args.area), SpherePlane(args.radius_sphere)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for d in ds:
            geom = CylinderPlaneGeometry(args.a, args.length, d, args.theta)
            rows.append([
                d,
                electrostatic_force_pfa(geom, args.v0),
                baseline_force(pp, "electrostatic", d, args.v0),
                baseline_force(sp, "electrostatic", d, args.v0),
                casimir_force_pfa(geom),
                baseline_force(pp, "casimir", d),
                baseline_force(sp, "casimir", d),
            ])
    _write_csv(args, ["d_m", "F_el_cp", "F_el_pp", "F_el_sp", "F_cas_cp", "F_cas_pp", "F_cas_sp"], rows)


def _material(name: str, args):
    name = name.strip().lower()
    if name == "plasma":
        return Plasma(args.omega_p)
    if name == "drude":
        return Drude(args.omega_p, args.nu)
    if name in ("perfect", "ideal"):
        return PerfectConductor()
    if name == "tabulated":
        if not args.table:
            raise UsageError("material 'tabulated' needs --table")
        return Tabulated(load_permittivity_table(args.table), zero_freq=args.zero_freq,
                         omega_p=args.omega_p, nu=args.nu)
    raise UsageError(f"unknown material {name!r} (plasma, drude, perfect, tabulated)")


def cmd_lifshitz_ratio(args) -> None:
    names = [m.strip().lower() for m in args.material.split(",") if m.strip()]
    models = [_material(n, args) for n in names]
    cfg = LifshitzConfig(xi_max=args.xi_max, rel_tol=args.rel_tol)
    scheme = PfaScheme(args.scheme)
    if args.sweep == "distance":
        grid = _grid(args.d_min, args.d_max, args.points, log=False)
        cases = [(CylinderPlaneGeometry(args.a, args.length, d), ThermalState(args.temperature)) for d in grid]
    else:
        grid = _grid(args.t_min, args.t_max, args.points, log=False)
        geom = CylinderPlaneGeometry(args.a, args.length, args.d)
        cases = [(geom, ThermalState(T)) for T in grid]
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for x, (geom, thermal) in zip(grid, cases):
            rows.append([x] + [normalized_ratio(geom, thermal, m, cfg, scheme=scheme) for m in models])
    _write_csv(args, ["sweep_var"] + [f"ratio_{n}" for n in names], rows)


def cmd_pfa_compare(args) -> None:
    interaction = Interaction(args.interaction)
    grid = _grid(args.x_min, args.x_max, args.points, log=True)
    if grid[-1] > 1:
        raise UsageError("d/a grid must lie in (0, 1]")
    columns = ["d_over_a"] + [f"ratio_{s.value}" for s in PfaScheme]
    if interaction is Interaction.ELECTROSTATIC:
        columns.append("ratio_exact")
    rows = []
    for x in grid:
        row = [x] + [pfa_ratio(x, s, interaction) for s in PfaScheme]
        if interaction is Interaction.ELECTROSTATIC:
            row.append(exact_pfa_ratio(x))
        rows.append(row)
    _write_csv(args, columns, rows)


def cmd_eta(args) -> None:
    rows = []
    for interaction in Interaction:
        for scheme in PfaScheme:
            eta = eta_estimate(scheme, interaction)
            rows.append([scheme.value, interaction.value, eta.value, eta.est_error,
                         REFERENCE_ETA[(scheme, interaction)]])
    _write_csv(args, ["scheme", "interaction", "eta", "est_error", "eta_reference"], rows)


def cmd_calibrate(args) -> None:
    data = load_calibration_file(args.datafile)
    act = ActuatorModel(alpha_act=args.alpha_act, spacing=args.spacing, alpha_act_err=args.alpha_act_err)
    if args.procedure in ("parabola", "parallelism"):
        fit = fit_parabola(data)
    elif args.procedure == "powerlaw":
        fit = fit_gap_powerlaw(data, act, v_max_guess=args.v_max_guess)
    else:
        fit = fit_lorentzian(data)
    lines = [f"# fit: {args.procedure}  data: {args.datafile}  units: {data.x_unit} {data.y_unit}", fit.report()]
    if "d_in" in fit.extra:
        lines.append(f"d_in = {fit.extra['d_in']:.10g} +/- {fit.extra['d_in_err']:.3g} m")
    if args.procedure == "parallelism":
        lines.append(f"delta_theta = {parallelism_from_parabola(fit, act):.6g} rad")
    sys.stdout.write("\n".join(lines) + "\n")
    out = args.out or str(Path(args.datafile).with_suffix(".residuals.csv"))
    buf = io.StringIO()
    buf.write(f"# cylcasimir {__version__} calibrate {args.procedure}\n")
    for k, v in fit.params.items():
        buf.write(f"# {k} = {fmt(v)} +/- {fmt(fit.std_errors[k])}\n")
    buf.write(f"# chi2 = {fmt(fit.chi2)}\n# dof = {fit.dof}\n")
    buf.write("x,y,sigma,residual,pull\n")
    for x, y, s, r in zip(data.x, data.y, data.sigma, fit.residuals):
        buf.write(",".join(fmt(v) for v in (x, y, s, r, r / s)) + "\n")
    if out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(out).write_text(buf.getvalue(), encoding="utf-8")


def _parse_truth(text: str) -> dict[str, float]:
    truth = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise UsageError(f"--truth entries must be name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            truth[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"--truth value for {k.strip()!r} is not a number") from None
    return truth


def cmd_synth(args) -> None:
    truth = _parse_truth(args.truth)
    names = MODELS[args.model][1]
    unknown = set(truth) - set(names)
    if unknown or set(names) - set(truth):
        raise UsageError(f"--truth for {args.model} needs exactly {', '.join(names)}")
    x = _grid(args.x_min, args.x_max, args.points, log=False)
    x_unit, y_unit = _SYNTH_UNITS[args.model]
    data = synth_dataset(args.model, truth, x, args.noise, seed=args.seed, relative=args.relative,
                         x_unit=x_unit, y_unit=y_unit)
    comments = [f"cylcasimir {__version__} synth", f"model = {args.model}", f"truth = {args.truth}",
                f"noise = {args.noise} relative = {args.relative}", f"seed = {args.seed}"]
    if args.out in (None, "-"):
        raise UsageError("synth needs --out <path>")
    save_calibration_file(args.out, data, comments)


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--out", help="output path ('-' or omitted: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=50)


def _geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, default=100e-6, help="cylinder radius (m)")
    p.add_argument("--length", "--L", dest="length", type=float, default=1e-2, help="cylinder length (m)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cylcasimir", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cylcasimir {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("force-table", help="electrostatic and Casimir forces for three geometries")
    _common(p)
    _geometry(p)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--v0", type=float, default=0.05)
    p.add_argument("--area", type=float, default=1e-6, help="plate area (m^2)")
    p.add_argument("--radius-sphere", type=float, default=100e-6)
    p.add_argument("--d-min", type=float, default=1e-6)
    p.add_argument("--d-max", type=float, default=10e-6)
    p.set_defaults(func=cmd_force_table)

    p = sub.add_parser("lifshitz-ratio", help="thermal Casimir force over the ideal force")
    _common(p)
    _geometry(p)
    p.add_argument("--sweep", choices=("distance", "temperature"), default="distance")
    p.add_argument("--material", default="plasma,drude")
    p.add_argument("--temperature", "--T", dest="temperature", type=float, default=300.0)
    p.add_argument("--d", type=float, default=3e-6)
    p.add_argument("--d-min", type=float, default=1e-6)
    p.add_argument("--d-max", type=float, default=5e-6)
    p.add_argument("--t-min", type=float, default=253.15)
    p.add_argument("--t-max", type=float, default=333.15)
    p.add_argument("--omega-p", type=float, default=AU_OMEGA_P)
    p.add_argument("--nu", type=float, default=AU_NU)
    p.add_argument("--table")
    p.add_argument("--zero-freq", choices=("plasma", "drude"), default="drude")
    p.add_argument("--scheme", choices=[s.value for s in PfaScheme], default="plane")
    p.add_argument("--xi-max", type=float, default=1e17)
    p.add_argument("--rel-tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_lifshitz_ratio)

    p = sub.add_parser("pfa-compare", help="proximity schemes against the leading order")
    _common(p)
    p.add_argument("--interaction", choices=[i.value for i in Interaction], default="electrostatic")
    p.add_argument("--x-min", type=float, default=1e-5)
    p.add_argument("--x-max", type=float, default=1.0)
    p.set_defaults(func=cmd_pfa_compare)

    p = sub.add_parser("eta", help="subleading proximity coefficients")
    _common(p)
    p.set_defaults(func=cmd_eta)

    p = sub.add_parser("calibrate", help="fit a calibration data file")
    _common(p)
    p.add_argument("procedure", choices=("parabola", "powerlaw", "lorentzian", "parallelism"))
    p.add_argument("datafile")
    p.add_argument("--alpha-act", type=float, default=150e-9)
    p.add_argument("--alpha-act-err", type=float, default=15e-9)
    p.add_argument("--spacing", type=float, default=0.02)
    p.add_argument("--v-max-guess", type=float, default=None)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("synth", help="write a synthetic calibration data file")
    _common(p)
    p.add_argument("--model", choices=sorted(MODELS), required=True)
    p.add_argument("--truth", required=True, help="name=value,... for every model parameter")
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--relative", action="store_true")
    p.set_defaults(func=cmd_synth)
    return parser


def read_config(path) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:
        if command in action.choices:
            return action.choices[command]
    raise UsageError(f"unknown command {command!r}")


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        config = read_config(args.config)
        sub = _subparser(parser, args.command)
        dests = {a.dest: a for a in sub._actions}
        unknown = sorted(k for k in config if k not in dests or k in ("help", "config"))
        if unknown:
            raise UsageError(f"{args.config}: unknown key(s) {', '.join(unknown)}")
        defaults = {}
        for key, value in config.items():
            action = dests[key]
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                defaults[key] = value  # argparse applies `type` to string defaults
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CasimirError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
