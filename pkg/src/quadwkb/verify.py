"""End-to-end verification checks behind ``quadwkb verify``.

Each check measures one quantity, compares it with a fixed threshold and
records its wall time. Checks with a runtime budget fail when they exceed it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import closed_form as cf
from . import electrostatics as es
from .core import Cubic, Linear, Logarithmic, PhysicalParams, WkbProblem
from .numerics import adaptive_gl
from .oracle import OracleConfig, airy_reference_linear, exact_spectrum
from .wkb import phase_integral, solve_level

REDUCED = PhysicalParams()
PHASE_ENERGIES = (0.5, 1.0, 2.0, 5.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    threshold: float
    passed: bool
    seconds: float = 0.0
    budget: float | None = None

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        budget = f" budget={self.budget:g}s" if self.budget is not None else ""
        return (f"{verdict}  {self.name:<44s} measured={self.measured:.3e} "
                f"threshold={self.threshold:.1e} time={self.seconds:.2f}s{budget}")


def _timed(fn: Callable[[], float]) -> tuple[float, float]:
    t0 = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - t0


def _result(name, measured, threshold, seconds, budget=None, strict_less=True) -> CheckResult:
    ok = measured < threshold if strict_less else measured <= threshold
    if budget is not None:
        ok = ok and seconds < budget
    return CheckResult(name, float(measured), threshold, bool(ok), seconds, budget)


def phase_agreement() -> float:
    worst = 0.0
    for pot in (Linear(1.0), Cubic(1.0), Logarithmic(1.0, 1.0)):
        problem = WkbProblem(REDUCED, pot)
        for E in PHASE_ENERGIES:
            num = phase_integral(problem, E).phase
            ref = cf.analytic_phase(pot, REDUCED, E)
            worst = max(worst, abs(num - ref) / ref)
    return worst


def spectrum_agreement() -> dict[str, float]:
    out = {}
    ns = range(1, 21)
    lin = WkbProblem(REDUCED, Linear(1.0))
    out["linear"] = max(abs(solve_level(lin, n).energy / cf.linear_energy(n, REDUCED, 1.0) - 1.0) for n in ns)
    cub = WkbProblem(REDUCED, Cubic(1.0))
    out["cubic"] = max(abs(solve_level(cub, n).energy / cf.cubic_energy(n, REDUCED, 1.0) - 1.0) for n in ns)
    log = WkbProblem(REDUCED, Logarithmic(1.0, 1.0))
    rel, offset_dev = 0.0, 0.0
    shift = cf.log_variant_offset(1.0)
    for n in ns:
        e = solve_level(log, n).energy
        red = cf.log_energy(n, REDUCED, 1.0, 1.0, cf.ClosedFormVariant.REDERIVED_LOG)
        pub = cf.log_energy(n, REDUCED, 1.0, 1.0, cf.ClosedFormVariant.PUBLISHED_LOG)
        rel = max(rel, abs(e - red) / abs(red))
        offset_dev = max(offset_dev, abs((e - pub) - shift))
    out["log_rederived"] = rel
    out["log_published_offset"] = offset_dev
    return out


def oracle_vs_airy(levels: int = 5) -> float:
    spec = exact_spectrum(WkbProblem(REDUCED, Linear(1.0)), OracleConfig(levels=levels))
    ref = np.array([airy_reference_linear(n, REDUCED, 1.0) for n in range(1, levels + 1)])
    return float(np.max(np.abs(spec.eigenvalues / ref - 1.0)))


def maslov_adjudication(n_lo: int = 5, n_hi: int = 10) -> tuple[float, float]:
    """(max WKB error with maslov 1/4, max relative mismatch of the maslov-1/2 error to its prediction)."""
    base = WkbProblem(REDUCED, Linear(1.0))
    exact = exact_spectrum(base, OracleConfig(levels=n_hi)).eigenvalues
    quarter, half = 0.0, 0.0
    for n in range(n_lo, n_hi + 1):
        e = exact[n - 1]
        err_q = abs(solve_level(base.with_(maslov=0.25), n).energy - e) / e
        err_h = abs(solve_level(base, n).energy - e) / e
        predicted = abs(((n - 0.5) / (n - 0.25)) ** (2.0 / 3.0) - 1.0)
        quarter = max(quarter, err_q)
        half = max(half, abs(err_h - predicted) / predicted)
    return quarter, half


def log_field_residual() -> float:
    e0, r0 = 1.0, 1.0
    field = es.field_from_density(es.LogDensity(e0, r0))
    r = np.linspace(0.05, 10.0, 400)
    return float(np.max(np.abs(field(r) / r - e0 * (0.5 * np.log(r / r0) - 0.25))))


def gauss_inverse_error() -> float:
    """Recover rho from (1/r) d(r E_r)/dr with a fourth-order central difference."""
    profiles = [
        es.PowerLawDensity(1.0, 1.0),
        es.PowerLawDensity(1.0, 3.0),
        es.LogDensity(1.0, 0.1),
        es.CustomDensity(lambda s: np.exp(-s) + 1.0, "exp"),
    ]
    r = np.linspace(0.5, 5.0, 37)
    h = 1e-3
    worst = 0.0
    for prof in profiles:
        field = es.field_from_density(prof)

        def flux(x):
            return x * field(x)

        d = (-flux(r + 2 * h) + 8 * flux(r + h) - 8 * flux(r - h) + flux(r - 2 * h)) / (12 * h)
        rho = prof(r)
        worst = max(worst, float(np.max(np.abs(d / r - rho) / np.abs(rho))))
    return worst


def scaling_error() -> float:
    one = WkbProblem(REDUCED, Linear(1.0))
    eight = WkbProblem(REDUCED, Linear(8.0))
    return max(abs(solve_level(eight, n).energy / solve_level(one, n).energy - 4.0) for n in range(1, 11))


def monotonicity_violations() -> int:
    bad = 0
    for pot in (Linear(1.0), Cubic(1.0), Logarithmic(1.0, 1.0)):
        problem = WkbProblem(REDUCED, pot)
        phases = [phase_integral(problem, E).phase for E in np.linspace(0.05, 8.0, 40)]
        bad += int(np.sum(np.diff(phases) <= 0.0))
        energies = [solve_level(problem, n).energy for n in range(1, 11)]
        bad += int(np.sum(np.diff(energies) <= 0.0))
    return bad


def node_count_mismatches(levels: int = 5) -> int:
    spec = exact_spectrum(WkbProblem(REDUCED, Linear(1.0)), OracleConfig(levels=levels))
    return sum(1 for i, c in enumerate(spec.node_counts) if c != i)


def log_spacing_error() -> float:
    worst = 0.0
    for r0, mass in ((1.0, 1.0), (0.3, 1.0), (1.0, 4.0), (2.5, 0.2)):
        params = PhysicalParams(mass=mass)
        problem = WkbProblem(params, Logarithmic(1.0, r0))
        energies = [solve_level(problem, n).energy for n in range(1, 11)]
        for n in range(1, 10):
            expected = 0.5 * math.log((2 * n + 1) / (2 * n - 1))
            worst = max(worst, abs((energies[n] - energies[n - 1]) - expected))
    return worst


def beta_identity_error() -> float:
    # x = t^3 removes the x^(-2/3) factor: int_0^1 3 sqrt(1 - t^3) dt
    quad = adaptive_gl(lambda t: 3.0 * np.sqrt(np.maximum(1.0 - t**3, 0.0)), 0.0, 1.0, rtol=1e-14).value
    exact = cf.gamma_value(1 / 3) * cf.gamma_value(1.5) / cf.gamma_value(11 / 6)
    return abs(quad - exact) / exact


def gamma_integral_error() -> float:
    # x = y^2: int_0^inf sqrt(x) e^-x dx = int_0^inf 2 y^2 e^(-y^2) dy, tail beyond y = 12 below 1e-60
    quad = adaptive_gl(lambda y: 2.0 * y * y * np.exp(-y * y), 0.0, 12.0, rtol=1e-14).value
    return abs(quad - math.sqrt(math.pi) / 2.0) / (math.sqrt(math.pi) / 2.0)


def coupling_notes() -> list[str]:
    """Where -Q_rr dE_r/dr from each density disagrees with the preset potential (reported, not judged)."""
    from .core import QuadrupoleTensor

    tensor = QuadrupoleTensor.axial(1.0)
    r = np.linspace(0.5, 5.0, 10)
    notes = []
    for label, profile, preset in (
        ("linear", es.linear_case_density(1.0), Linear(1.0)),
        ("cubic", es.cubic_case_density(1.0), Cubic(1.0)),
        ("log", es.LogDensity(1.0, 1.0), Logarithmic(1.0, 1.0)),
    ):
        coupled = es.quadrupole_coupling(tensor, es.field_from_density(profile))(r)
        diff = coupled - preset(r)
        ratio = coupled / preset(r)
        if np.allclose(diff, 0.0, atol=1e-12):
            notes.append(f"coupling {label}: matches preset")
        elif np.allclose(ratio, ratio[0], rtol=1e-10):
            notes.append(f"coupling {label}: coupled / preset = {ratio[0]:.12g}")
        else:
            notes.append(f"coupling {label}: coupled - preset = {diff[0]:.12g} (constant in r)")
    return notes


def run_checks() -> list[CheckResult]:
    results = []

    v, t = _timed(phase_agreement)
    results.append(_result("phase integral vs closed forms", v, 1e-9, t, budget=1.0))

    spectra, t = _timed(spectrum_agreement)
    results.append(_result("linear levels vs closed form (n=1..20)", spectra["linear"], 1e-8, t, budget=2.0))
    results.append(_result("cubic levels vs closed form (n=1..20)", spectra["cubic"], 1e-8, t, budget=2.0))
    results.append(_result("log levels vs rederived form (n=1..20)", spectra["log_rederived"], 1e-8, t, budget=2.0))
    results.append(_result("log published offset (Q E0/2) ln 2", spectra["log_published_offset"], 1e-8, t,
                           budget=2.0, strict_less=False))

    v, t = _timed(oracle_vs_airy)
    results.append(_result("oracle vs Airy reference (n=1..5)", v, 1e-6, t, budget=10.0))

    (quarter, half), t = _timed(maslov_adjudication)
    results.append(_result("WKB maslov=1/4 error vs oracle (n>=5)", quarter, 1e-3, t, budget=10.0))
    results.append(_result("WKB maslov=1/2 error vs prediction (n>=5)", half, 0.1, t, budget=10.0))

    v, t = _timed(log_field_residual)
    results.append(_result("log density field residual", v, 1e-12, t))
    v, t = _timed(gauss_inverse_error)
    results.append(_result("Gauss law inverse recovers rho", v, 1e-6, t))

    v, t = _timed(scaling_error)
    results.append(_result("E_n(8 muQ) / E_n(muQ) - 4", v, 1e-9, t, strict_less=False))
    v, t = _timed(monotonicity_violations)
    results.append(_result("monotonicity violations (phase, levels)", v, 0.0, t, strict_less=False))
    v, t = _timed(node_count_mismatches)
    results.append(_result("oracle node count mismatches", v, 0.0, t, strict_less=False))
    v, t = _timed(log_spacing_error)
    results.append(_result("log level spacing vs (QE0/2) ln((2n+1)/(2n-1))", v, 1e-9, t, strict_less=False))

    v, t = _timed(lambda: abs(cf.gamma_value(0.5) - math.sqrt(math.pi)) / math.sqrt(math.pi))
    results.append(_result("Gamma(1/2) = sqrt(pi)", v, 1e-12, t, strict_less=False))
    v, t = _timed(beta_identity_error)
    results.append(_result("Beta identity for the cubic phase", v, 1e-10, t, strict_less=False))
    v, t = _timed(gamma_integral_error)
    results.append(_result("int sqrt(x) e^-x dx = sqrt(pi)/2", v, 1e-10, t, strict_less=False))
    return results


def verify_suite() -> tuple[bool, list[CheckResult]]:
    results = run_checks()
    return all(r.passed for r in results), results
