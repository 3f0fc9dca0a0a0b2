"""Command-line entry point.

Exit codes: 0 success, 1 usage/config/I-O error, 2 numerical failure or a
failed verification check.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

import numpy as np

from . import closed_form, electrostatics, wkb
from .core import QuadrupoleTensor
from .errors import NumericalError, QuadWkbError, UsageError
from .report import (
    RunConfig,
    default_jobs,
    emit,
    emit_table,
    parse_methods,
    parse_range,
    read_config_file,
    run_spectrum,
)
from .verify import coupling_notes, verify_suite

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(parser: argparse.ArgumentParser) -> None:
    add = parser.add_argument
    add("--potential", choices=["linear", "cubic", "log", "power"], default="linear")
    for name in ("mu", "nu", "E0", "r0", "A", "Q", "hbar", "mass", "k"):
        add(f"--{name}", type=float)
    add("--p", type=float)
    add("--l", default="0", help="angular quantum number |l|, or a range a:b")
    add("--n", default="1:1", help="radial quantum numbers, a:b")
    add("--method", default="wkb-numeric",
        help="comma-separated subset of wkb-numeric,closed-form,oracle, or 'all'")
    add("--maslov", type=float, choices=[0.25, 0.5], default=0.5)
    add("--langer", choices=["on", "off"], default="on")
    add("--log-variant", choices=["paper", "rederived"], default=None)
    add("--output", choices=["csv", "json"], default="csv")
    add("--out", default=None, help="output file (default: standard output)")
    add("--config", default=None, help="flat 'key = value' file; command-line flags win")
    add("--jobs", type=int, default=None)
    add("--grid-points", type=int, default=4000, help="oracle grid size")
    add("--r-max-factor", type=float, default=2.0, help="oracle domain / outer turning point")
    add("--E", default="0.5,1,2,5", help="energies for the phase subcommand")
    add("--points", type=int, default=200, help="samples for wavefunction/field tables")
    add("--r-min", type=float, default=0.1)
    add("--r-max", type=float, default=5.0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quadwkb", description="WKB spectra of a quadrupole in cylindrical radial fields")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    for name, text in (
        ("spectrum", "energy levels by WKB, closed form and/or the finite-difference oracle"),
        ("phase", "phase integral at given energies, numeric and closed form"),
        ("wavefunction", "WKB radial wavefunction samples for the requested levels"),
        ("field", "charge density, radial field and effective potential on a grid"),
        ("verify", "run every verification check and report pass/fail"),
    ):
        _common(sub.add_parser(name, help=text, description=text))
    return parser


def _with_config(argv: list[str]) -> list[str]:
    """Splice ``--config`` file entries in right after the subcommand so explicit flags override them."""
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None or not argv:
        return argv
    extra: list[str] = []
    for key, value in read_config_file(path).items():
        if key == "config":
            raise UsageError("config files cannot include other config files")
        extra += [f"--{key}", value]
    return argv[:1] + extra + argv[1:]


def config_from_args(args: argparse.Namespace) -> RunConfig:
    n_min, n_max = parse_range(args.n, "n")
    l_lo, l_hi = parse_range(args.l, "l")
    try:
        energies = tuple(float(x) for x in args.E.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--E expects comma-separated numbers, got {args.E!r}") from None
    values: dict[str, Any] = dict(
        subcommand=args.subcommand, potential=args.potential,
        n_min=n_min, n_max=n_max, l_values=tuple(range(l_lo, l_hi + 1)),
        methods=parse_methods(args.method), maslov=args.maslov, langer=args.langer == "on",
        log_variant=args.log_variant or "rederived", output=args.output, out=args.out,
        jobs=args.jobs if args.jobs is not None else default_jobs(),
        grid_points=args.grid_points, r_max_factor=args.r_max_factor, energies=energies,
        points=args.points, r_min=args.r_min, r_max=args.r_max,
    )
    for name in ("mu", "nu", "E0", "r0", "A", "p", "Q", "hbar", "mass", "k"):
        if getattr(args, name) is not None:
            values[name] = getattr(args, name)
    return RunConfig(**values)


def _phase_table(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    cols = ["l", "E", "r1", "r2", "phase", "phase_closed", "rel_err", "quadrature_error", "evaluations"]
    recs = []
    for l in cfg.l_values:
        problem = cfg.problem(l)
        for E in cfg.energies:
            res = wkb.phase_integral(problem, E)
            ref = None
            if closed_form.has_closed_form(problem):
                ref = closed_form.analytic_phase(problem.potential, problem.params, E)
            recs.append(dict(
                l=l, E=E, r1=res.turning_points.r1, r2=res.turning_points.r2, phase=res.phase,
                phase_closed=ref,
                rel_err=None if ref in (None, 0.0) else abs(res.phase - ref) / ref,
                quadrature_error=res.quadrature_error, evaluations=res.evaluations,
            ))
    return cols, recs


def _wavefunction_table(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    cols = ["n", "l", "E", "r", "u", "R", "valid"]
    recs = []
    for l in cfg.l_values:
        problem = cfg.problem(l)
        for n in cfg.levels:
            sol = wkb.solve_level(problem, n)
            tp = sol.turning_points
            grid = np.linspace(tp.r1, tp.r2, cfg.points)
            wf = wkb.wkb_wavefunction(problem, sol.energy, grid)
            for r, u, R, ok in zip(wf.r, wf.u, wf.R, wf.valid):
                recs.append(dict(n=n, l=l, E=sol.energy, r=float(r),
                                 u=float(u) if ok else None, R=float(R) if ok else None, valid=bool(ok)))
    return cols, recs


def _field_table(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    if cfg.potential == "linear":
        profile = electrostatics.linear_case_density(cfg.mu)
    elif cfg.potential == "cubic":
        profile = electrostatics.cubic_case_density(cfg.nu)
    elif cfg.potential == "log":
        profile = electrostatics.LogDensity(cfg.E0, cfg.r0)
    else:
        raise UsageError("the field subcommand needs --potential linear, cubic or log")
    if not 0.0 < cfg.r_min < cfg.r_max:
        raise UsageError("field grid needs 0 < r-min < r-max")
    field = electrostatics.field_from_density(profile)
    coupled = electrostatics.quadrupole_coupling(QuadrupoleTensor.axial(cfg.Q), field)
    preset = cfg.build_potential()
    r = np.linspace(cfg.r_min, cfg.r_max, cfg.points)
    cols = ["r", "rho", "E_r", "V_coupled", "V_preset"]
    recs = [dict(r=float(x), rho=float(profile(x)), E_r=float(field(x)),
                 V_coupled=float(coupled(x)), V_preset=float(preset(x))) for x in r]
    return cols, recs


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc.strerror}") from None


def _notice(cfg: RunConfig, explicit_variant: bool) -> None:
    if cfg.potential == "log" and "closed-form" in cfg.methods and not explicit_variant:
        print("note: log closed form uses the rederived variant (factor 2 inside the logarithm); "
              "pass --log-variant paper for the published expression", file=sys.stderr)


def run(argv: Sequence[str]) -> int:
    argv = _with_config(list(argv))
    args = build_parser().parse_args(argv)
    if args.subcommand is None:
        raise UsageError("a subcommand is required: spectrum | phase | wavefunction | field | verify")
    cfg = config_from_args(args)

    if cfg.subcommand == "verify":
        ok, results = verify_suite()
        for res in results:
            print(res.line())
        for note in coupling_notes():
            print(f"NOTE  {note}")
        failed = [r.name for r in results if not r.passed]
        if failed:
            print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
            return EXIT_NUMERIC
        print(f"all {len(results)} checks passed")
        return EXIT_OK

    if cfg.subcommand == "spectrum":
        _notice(cfg, args.log_variant is not None)
        text = emit(run_spectrum(cfg), cfg.output, cfg.echo())
    else:
        builder = {"phase": _phase_table, "wavefunction": _wavefunction_table, "field": _field_table}
        cols, recs = builder[cfg.subcommand](cfg)
        text = emit_table(cols, recs, cfg.output, cfg.echo())
    _write(text, cfg.out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except QuadWkbError as exc:
        # invalid physical parameters reach here (e.g. --mu -1)
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
