"""Command line front end.

Exit status: 0 on success, 2 on configuration errors, 3 on numerical
failure.  Every option can also come from a ``key=value`` file passed with
``--config``; options given on the command line take precedence.
"""

import argparse
import sys

import numpy as np

from . import __version__
from ._validation import check_grid
from .eigen import ConvergenceError
from .estimators import ParabolicStarkSpectrum, SlaterPTSpectrum
from .io import export_csv, export_svg, format_float, write_report_csv
from .perturbation import analyze_pencil, hydrogen_shell_report
from .scan import (
    detect_exceptional_points,
    estimate_gc,
    refine_exceptional_point,
    scan,
)
from .slater import PencilError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

MODEL_ALIASES = {"ho": "harmonic", "harmonic": "harmonic", "coulomb": "coulomb",
                 "linear": "linear", "hydrogen": "hydrogen"}


class ConfigError(ValueError):
    pass


def _basis_options(p, g_max):
    p.add_argument("--alpha", type=float, default=2.0, help="Slater exponent")
    p.add_argument("--m", type=int, default=0, help="magnetic quantum number")
    p.add_argument("--l-max", type=int, default=None, help="highest l (default |m|+6)")
    p.add_argument("--n-radial", type=int, default=10, help="radial powers per l")
    _grid_options(p, g_max)


def _grid_options(p, g_max, g_steps=101):
    p.add_argument("--g", type=float, default=None, help="single coupling (overrides the grid)")
    p.add_argument("--g-min", type=float, default=0.0)
    p.add_argument("--g-max", type=float, default=g_max)
    p.add_argument("--g-steps", type=int, default=g_steps)


def _output_options(p):
    p.add_argument("-o", "--output", default="-", help="CSV path, '-' for stdout")
    p.add_argument("--svg", default=None, help="also write a static SVG plot here")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ptstark",
        description="Spectra of p^2/2 + V(r) + i g z for V = r^2/2, -1/r, r.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="key=value file of option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ho", help="isotropic oscillator, variational scan")
    _basis_options(p, g_max=1.0)
    p.add_argument("--levels", dest="n_track", type=int, default=5)
    _output_options(p)

    for name in ("coulomb", "linear"):
        p = sub.add_parser(name, help=f"{name} potential, variational scan")
        _basis_options(p, g_max=2.0)
        p.add_argument("--n-track", type=int, default=8)
        _output_options(p)

    p = sub.add_parser("scan", help="scan with refined exceptional points and g_c")
    p.add_argument("--model", choices=sorted(MODEL_ALIASES), default="linear")
    _basis_options(p, g_max=2.0)
    p.add_argument("--n-track", type=int, default=8)
    p.add_argument("--n-max", type=int, default=2, help="hydrogen: highest shell")
    p.add_argument("--basis-size", type=int, default=40, help="hydrogen: channel basis size")
    p.add_argument("--refine-tol", type=float, default=1e-6)
    p.add_argument("--im-tol", type=float, default=1e-7)
    _output_options(p)

    p = sub.add_parser("perturb", help="first-order corrections on degenerate levels")
    p.add_argument("--model", choices=sorted(MODEL_ALIASES), default="hydrogen")
    p.add_argument("--n", type=int, default=2, help="hydrogen shell")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--l-max", type=int, default=None)
    p.add_argument("--n-radial", type=int, default=10)
    p.add_argument("--levels", type=int, default=10, help="groups among the lowest levels")
    p.add_argument("--degeneracy-tol", type=float, default=1e-6)
    _output_options(p)

    p = sub.add_parser("hydrogen-parabolic", help="hydrogen via parabolic separation")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--basis-size", type=int, default=40)
    p.add_argument("--no-basis-check", dest="basis_check", action="store_false")
    _grid_options(p, g_max=0.01)
    p.add_argument("--n-track", type=int, default=None)
    p.add_argument("--im-tol", type=float, default=1e-7)
    _output_options(p)
    return parser


def _read_config(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return values


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    pre.add_argument("command", nargs="?")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    config = _read_config(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in subparsers.choices), None)
    if command is None:
        return
    sp = subparsers.choices[command]
    actions = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, value in config.items():
        if key not in actions or key == "help":
            raise ConfigError(f"unknown config key {key!r} for command {command!r}")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = value
    sp.set_defaults(**defaults)


def _grid(args):
    if args.g is not None:
        return np.array([float(args.g)])
    return check_grid(args.g_min, args.g_max, args.g_steps)


def _metadata(args, grid, **extra):
    meta = {"tool": "ptstark", "version": __version__, "command": args.command}
    for key in ("alpha", "m", "n_radial", "n_track", "model"):
        if hasattr(args, key):
            meta[key] = getattr(args, key)
    if hasattr(args, "l_max"):
        meta["l_max"] = args.l_max if args.l_max is not None else abs(args.m) + 6
    if grid is not None:
        meta.update(g_min=format_float(grid[0]), g_max=format_float(grid[-1]), g_steps=len(grid))
    meta.update(extra)
    return meta


def _ep_comments(estimates):
    lines = []
    for e in estimates:
        lines.append(
            f"ep pair={e.trajectory_pair[0]}-{e.trajectory_pair[1]} "
            f"g_lower={format_float(e.g_lower)} g_upper={format_float(e.g_upper)} "
            f"g_estimate={format_float(e.g_estimate)} refined={str(e.refined).lower()}"
        )
    return lines


def _variational(args, potential):
    est = SlaterPTSpectrum(potential=potential, alpha=args.alpha, m=args.m,
                           l_max=args.l_max, n_radial=args.n_radial).fit()
    return est


def _run_scan(args, solver, grid, refine=False, **extra):
    gscan = scan(solver, grid, n_track=args.n_track)
    if np.all(np.isnan(gscan.values)):
        raise ConvergenceError("every grid point failed")
    im_tol = getattr(args, "im_tol", 1e-7)
    estimates = detect_exceptional_points(gscan, im_tol)
    meta = _metadata(args, grid, **extra)
    if refine:
        estimates = [refine_exceptional_point(solver, e, args.refine_tol, im_tol) for e in estimates]
        gc = estimate_gc(estimates)
        meta["g_c"] = "none" if gc is None else format_float(gc)
    condition = getattr(solver, "condition_", None)
    if condition is not None:
        meta["overlap_condition"] = format_float(condition.overlap_condition)
        meta["condition_warning"] = str(condition.warning).lower()
    export_csv(gscan, args.output, meta, _ep_comments(estimates))
    if args.svg:
        export_svg(gscan, args.svg, title=f"ptstark {args.command}")
    return EXIT_OK


def _cmd_variational(args):
    potential = MODEL_ALIASES[args.command]
    return _run_scan(args, _variational(args, potential), _grid(args), potential=potential)


def _cmd_scan(args):
    model = MODEL_ALIASES[args.model]
    if model == "hydrogen":
        solver = ParabolicStarkSpectrum(n_max=args.n_max, basis_size=args.basis_size).fit()
        return _run_scan(args, solver, _grid(args), refine=True, n_max=args.n_max,
                         basis_size=args.basis_size)
    return _run_scan(args, _variational(args, model), _grid(args), refine=True,
                     potential=model)


def _cmd_perturb(args):
    model = MODEL_ALIASES[args.model]
    if model == "hydrogen":
        reports = [hydrogen_shell_report(args.n, args.degeneracy_tol)]
        meta = _metadata(args, None, n=args.n)
        for key in ("alpha", "m", "n_radial", "l_max"):
            meta.pop(key, None)
    else:
        est = _variational(args, model)
        reports = analyze_pencil(est.pencil_, args.degeneracy_tol, n_levels=args.levels)
        meta = _metadata(args, None, levels=args.levels)
    meta["degeneracy_tol"] = format_float(args.degeneracy_tol)
    write_report_csv(reports, args.output, meta)
    return EXIT_OK


def _cmd_hydrogen(args):
    solver = ParabolicStarkSpectrum(n_max=args.n_max, basis_size=args.basis_size,
                                    check_basis=args.basis_check).fit()
    return _run_scan(args, solver, _grid(args), n_max=args.n_max, basis_size=args.basis_size)


COMMANDS = {
    "ho": _cmd_variational,
    "coulomb": _cmd_variational,
    "linear": _cmd_variational,
    "scan": _cmd_scan,
    "perturb": _cmd_perturb,
    "hydrogen-parabolic": _cmd_hydrogen,
}


def run(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except ConfigError as exc:
        print(f"ptstark: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, PencilError):
            print(f"ptstark: numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"ptstark: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, np.linalg.LinAlgError) as exc:
        print(f"ptstark: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"ptstark: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
