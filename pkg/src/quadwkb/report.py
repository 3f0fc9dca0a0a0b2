"""Run configuration, spectrum tables and their CSV/JSON serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Any, Iterable, Sequence

from . import closed_form, oracle, wkb
from .closed_form import ClosedFormVariant
from .core import EffectivePotential, PhysicalParams, WkbProblem, axial_shift, preset_potential
from .errors import NumericalError, PhaseDivergenceError, UsageError

METHODS = ("wkb-numeric", "closed-form", "oracle")
SUBCOMMANDS = ("spectrum", "phase", "wavefunction", "field", "verify")
SPECTRUM_COLUMNS = (
    "n", "l", "E_wkb", "E_closed", "E_oracle", "r1", "r2",
    "rel_err_wkb_vs_oracle", "rel_err_wkb_vs_closed", "phase_residual",
)
MAX_LEVEL = 200


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


@dataclass(frozen=True)
class RunConfig:
    subcommand: str = "spectrum"
    potential: str = "linear"
    mu: float = 1.0
    nu: float = 1.0
    E0: float = 1.0
    r0: float = 1.0
    A: float = 1.0
    p: float = 2.0
    Q: float = 1.0
    hbar: float = 1.0
    mass: float = 1.0
    k: float = 0.0
    n_min: int = 1
    n_max: int = 1
    l_values: tuple[int, ...] = (0,)
    methods: tuple[str, ...] = ("wkb-numeric",)
    maslov: float = 0.5
    langer: bool = True
    log_variant: str = "rederived"
    output: str = "csv"
    out: str | None = None
    jobs: int = 1
    grid_points: int = 4000
    r_max_factor: float = 2.0
    energies: tuple[float, ...] = (0.5, 1.0, 2.0, 5.0)
    points: int = 200
    r_min: float = 0.1
    r_max: float = 5.0

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if not 1 <= self.n_min <= self.n_max <= MAX_LEVEL:
            raise UsageError(f"n-range must satisfy 1 <= n_min <= n_max <= {MAX_LEVEL}, "
                             f"got {self.n_min}:{self.n_max}")
        if not self.l_values or any(l < 0 for l in self.l_values):
            raise UsageError("l must be a non-empty set of non-negative integers")
        if not self.methods:
            raise UsageError("method set is empty")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise UsageError(f"unknown method(s): {sorted(unknown)}")
        if self.maslov not in (0.25, 0.5):
            raise UsageError("maslov must be 0.25 or 0.5")
        if self.log_variant not in ("paper", "rederived"):
            raise UsageError("log-variant must be 'paper' or 'rederived'")
        if self.output not in ("csv", "json"):
            raise UsageError("output must be csv or json")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")
        if self.points < 2:
            raise UsageError("points must be >= 2")

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(hbar=self.hbar, mass=self.mass, k=self.k)

    @property
    def levels(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def build_potential(self) -> EffectivePotential:
        consts = {
            "linear": [self.mu], "cubic": [self.nu],
            "log": [self.E0, self.r0], "power": [self.A, self.p],
        }
        if self.potential not in consts:
            raise UsageError(f"unknown potential {self.potential!r}")
        return preset_potential(self.potential, consts[self.potential], self.Q)

    def problem(self, l: int) -> WkbProblem:
        return WkbProblem(self.params, self.build_potential(), l=l,
                          langer_modified=self.langer, maslov=self.maslov)

    @property
    def variant(self) -> ClosedFormVariant:
        return ClosedFormVariant(self.log_variant)

    def echo(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")
        return d


@dataclass(frozen=True)
class SpectrumRow:
    n: int
    l: int
    E_wkb: float | None = None
    E_closed: float | None = None
    E_oracle: float | None = None
    r1: float | None = None
    r2: float | None = None
    rel_err_wkb_vs_oracle: float | None = None
    rel_err_wkb_vs_closed: float | None = None
    phase_residual: float | None = None

    def __post_init__(self):
        for name in ("E_wkb", "E_closed", "E_oracle"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise NumericalError(f"non-finite {name} for n={self.n}, l={self.l}")


def _rel(a: float | None, b: float | None) -> float | None:
    if a is None or b is None:
        return None
    return abs(a - b) / abs(b) if b != 0.0 else abs(a - b)


def _wkb_task(problem: WkbProblem, n: int) -> wkb.LevelSolution:
    return wkb.solve_level(problem, n)


def _oracle_task(problem: WkbProblem, levels: int, grid_points: int, factor: float) -> list[float]:
    cfg = oracle.OracleConfig(grid_points=grid_points, r_max_factor=factor, levels=levels)
    return oracle.exact_spectrum(problem, cfg).eigenvalues.tolist()


def check_methods(config: RunConfig) -> None:
    if "closed-form" not in config.methods:
        return
    if any(l != 0 for l in config.l_values):
        raise UsageError("closed-form spectra exist only for s waves: use --l 0 or drop closed-form")
    if not config.langer:
        raise UsageError("closed-form spectra assume the Langer replacement: use --langer on")
    if config.potential == "power":
        raise UsageError("no closed-form spectrum for the power potential")


def _reference_geometry(problem: WkbProblem, n: int, energy: float) -> tuple[float | None, float | None, float | None]:
    try:
        tp = wkb.find_turning_points(problem, energy)
        target = (n - problem.maslov) * math.pi
        phase = wkb.phase_integral(problem, energy).phase
        return tp.r1, tp.r2, abs(phase - target) / target
    except PhaseDivergenceError:
        tp = wkb.find_turning_points(problem, energy)
        return tp.r1, tp.r2, None


def run_spectrum(config: RunConfig) -> list[SpectrumRow]:
    """One row per (l, n); each requested method is computed independently."""
    check_methods(config)
    params = config.params
    problems = {l: config.problem(l) for l in config.l_values}

    wkb_results: dict[tuple[int, int], wkb.LevelSolution] = {}
    oracle_results: dict[int, list[float]] = {}
    wkb_jobs = [(l, n) for l in config.l_values for n in config.levels] if "wkb-numeric" in config.methods else []
    oracle_jobs = list(config.l_values) if "oracle" in config.methods else []

    if config.jobs > 1 and len(wkb_jobs) + len(oracle_jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            ofut = {l: pool.submit(_oracle_task, problems[l], config.n_max, config.grid_points,
                                   config.r_max_factor) for l in oracle_jobs}
            wfut = {key: pool.submit(_wkb_task, problems[key[0]], key[1]) for key in wkb_jobs}
            wkb_results = {key: f.result() for key, f in wfut.items()}
            oracle_results = {l: f.result() for l, f in ofut.items()}
    else:
        for l in oracle_jobs:
            oracle_results[l] = _oracle_task(problems[l], config.n_max, config.grid_points, config.r_max_factor)
        for key in wkb_jobs:
            wkb_results[key] = _wkb_task(problems[key[0]], key[1])

    rows = []
    for l in sorted(config.l_values):
        problem = problems[l]
        for n in config.levels:
            sol = wkb_results.get((l, n))
            closed = None
            if "closed-form" in config.methods:
                closed = closed_form.closed_form_energy(problem, n, config.variant)
            exact = oracle_results[l][n - 1] if l in oracle_results else None
            if sol is not None:
                r1, r2, resid = sol.turning_points.r1, sol.turning_points.r2, sol.phase_residual
            else:
                r1, r2, resid = _reference_geometry(problem, n, closed if closed is not None else exact)
            e_wkb, e_closed, e_oracle = (None if e is None else axial_shift(params, e)
                                         for e in (sol.energy if sol else None, closed, exact))
            rows.append(SpectrumRow(
                n, l, e_wkb, e_closed, e_oracle, r1, r2,
                _rel(e_wkb, e_oracle), _rel(e_wkb, e_closed), resid,
            ))
    return rows


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.11e}"
    return str(value)


def emit_table(columns: Sequence[str], records: Iterable[dict[str, Any]], fmt: str,
               meta: dict[str, Any] | None = None) -> str:
    records = list(records)
    if not records:
        raise UsageError("refusing to emit an empty table")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_fmt(rec.get(c)) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        clean = [{c: (None if isinstance(rec.get(c), float) and math.isnan(rec[c]) else rec.get(c))
                  for c in columns} for rec in records]
        return json.dumps({"meta": meta or {}, "rows": clean}, indent=2, allow_nan=False) + "\n"
    raise UsageError(f"unknown output format {fmt!r}")


def emit(rows: Sequence[SpectrumRow], fmt: str = "csv", meta: dict[str, Any] | None = None) -> str:
    """Serialize spectrum rows; CSV uses 12 significant digits, JSON keeps full precision."""
    return emit_table(SPECTRUM_COLUMNS, (asdict(r) for r in rows), fmt, meta)


def rows_from_json(text: str) -> list[SpectrumRow]:
    data = json.loads(text)
    names = {f.name for f in fields(SpectrumRow)}
    return [SpectrumRow(**{k: v for k, v in row.items() if k in names}) for row in data["rows"]]


def parse_range(text: str, name: str) -> tuple[int, int]:
    """'a:b' or 'a' -> (a, b)."""
    try:
        if ":" in text:
            a, b = text.split(":", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"--{name} expects 'a:b' or a single integer, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"--{name} range is empty: {text!r}")
    return lo, hi


def parse_methods(text: str) -> tuple[str, ...]:
    items = [m.strip() for m in text.split(",") if m.strip()]
    if "all" in items:
        return METHODS
    return tuple(dict.fromkeys(items))


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise UsageError(f"{path}:{lineno}: empty key")
        values[key] = value
    return values


__all__ = [
    "RunConfig",
    "SpectrumRow",
    "emit",
    "emit_table",
    "run_spectrum",
]
