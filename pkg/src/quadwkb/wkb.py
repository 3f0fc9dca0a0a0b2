"""Semiclassical machinery: local momentum, turning points, phase integral, level solving.

The phase integral is taken after substituting r = r1 + (r2 - r1) sin^2(theta),
which turns the square-root zeros of q at simple turning points into smooth
factors, so plain Gauss-Legendre panels converge quickly. The remaining
log-type singularity of the logarithmic well at r -> 0 is handled by the
adaptive panel splitting.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import closed_form
from .core import EffectivePotential, WkbProblem
from .errors import (
    BracketingError,
    DomainError,
    InvalidParameterError,
    NoBoundRegionError,
    PhaseDivergenceError,
)
from .numerics import adaptive_gl, brentq, expand_bracket

DEGENERATE_WIDTH = 1e-14
_MAX_SCAN = 2100  # enough halvings/doublings to sweep the whole float range


@dataclass(frozen=True)
class TurningPoints:
    r1: float
    r2: float
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.r2 - self.r1


@dataclass(frozen=True)
class PhaseResult:
    phase: float
    quadrature_error: float
    evaluations: int
    turning_points: TurningPoints
    degenerate: bool = False


@dataclass(frozen=True)
class LevelSolution:
    n: int
    energy: float
    phase: float
    target: float
    turning_points: TurningPoints
    iterations: int

    @property
    def phase_residual(self) -> float:
        """|phase - (n - maslov) pi| relative to the target phase."""
        return abs(self.phase - self.target) / self.target


def _q2(problem: WkbProblem, E: float, r):
    """2m(E - V) - L hbar^2 / r^2 without domain checks (r > 0 assumed)."""
    p = problem.params
    L = problem.centrifugal_coefficient
    out = 2.0 * p.mass * (E - problem.potential.value(r))
    if L != 0.0:
        out = out - L * p.hbar**2 / np.square(r)
    return out


def local_momentum_sq(problem: WkbProblem, E: float, r):
    """q^2(r) = 2m[E - V(r)] - L hbar^2 / r^2; negative in forbidden regions."""
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("local momentum is defined only for r > 0")
    out = _q2(problem, E, arr)
    return float(out) if np.ndim(r) == 0 else out


def _length_scale(problem: WkbProblem) -> float:
    r0 = getattr(problem.potential, "r0", None)
    return float(r0) if r0 else 1.0


def _scan(f, start: float, factor: float, want_positive: bool) -> tuple[float, float]:
    """Multiply ``start`` by ``factor`` until sign(f) matches; returns (x, f(x))."""
    x = start
    for _ in range(_MAX_SCAN):
        fx = f(x)
        if (fx > 0.0) == want_positive and fx != 0.0:
            return x, fx
        x *= factor
        if x == 0.0 or not math.isfinite(x):
            break
    raise BracketingError(f"scan from r={start} by factor {factor} found no sign change")


def _centrifugal_peak(problem: WkbProblem) -> float:
    """Radius where q^2 is largest when L > 0; independent of the energy.

    d(q^2)/dr = 0  <=>  L hbar^2 = m r^3 V'(r), whose right side increases with r
    for every supported potential.
    """
    p = problem.params
    L = problem.centrifugal_coefficient
    pot = problem.potential

    def h(r):
        return L * p.hbar**2 - p.mass * r**3 * pot.derivative(r)

    start = _length_scale(problem)
    h0 = h(start)
    if h0 == 0.0:
        return start
    if h0 > 0.0:
        lo, flo = start, h0
        hi, fhi = _scan(h, start, 2.0, want_positive=False)
    else:
        hi, fhi = start, h0
        lo, flo = _scan(h, start, 0.5, want_positive=True)
    return brentq(h, lo, hi, fa=flo, fb=fhi, xtol=0.0)


def effective_minimum(problem: WkbProblem) -> float:
    """Smallest energy with a classically allowed region (-inf for the log well at l = 0)."""
    L = problem.centrifugal_coefficient
    if L <= 0.0:
        return problem.potential.infimum
    r = _centrifugal_peak(problem)
    p = problem.params
    return float(problem.potential.value(r) + L * p.hbar**2 / (2.0 * p.mass * r * r))


def find_turning_points(problem: WkbProblem, E: float) -> TurningPoints:
    """Classically allowed interval [r1, r2] at energy E.

    For L <= 0 (s waves) q^2 decreases monotonically so r1 = 0 and r2 is the
    single root; for L > 0 both roots flank the peak of q^2.
    """
    E = float(E)
    L = problem.centrifugal_coefficient
    pot = problem.potential

    def f(r):
        return float(_q2(problem, E, r))

    if L <= 0.0:
        inf_v = pot.infimum
        if L == 0.0 and math.isfinite(inf_v):
            if E < inf_v:
                raise NoBoundRegionError(f"E={E} lies below inf V = {inf_v}")
            if E == inf_v:
                return TurningPoints(0.0, 0.0, degenerate=True)
        start = _length_scale(problem)
        try:
            if f(start) > 0.0:
                lo, flo = start, f(start)
                hi, fhi = _scan(f, start, 2.0, want_positive=False)
                lo = max(lo, hi / 2.0)
                flo = f(lo)
            else:
                hi, fhi = start, f(start)
                lo, flo = _scan(f, start, 0.5, want_positive=True)
        except BracketingError as exc:
            if f(start) > 0.0:
                raise BracketingError(f"potential does not confine at E={E}: {exc}") from None
            raise NoBoundRegionError(f"no classically allowed region at E={E}") from None
        r2 = brentq(f, lo, hi, fa=flo, fb=fhi, xtol=0.0)
        return TurningPoints(0.0, r2)

    r_peak = _centrifugal_peak(problem)
    peak = f(r_peak)
    if peak < 0.0:
        raise NoBoundRegionError(f"q^2 < 0 everywhere at E={E} (max {peak:.3e} at r={r_peak:.6g})")
    if peak == 0.0:
        return TurningPoints(r_peak, r_peak, degenerate=True)
    inner, finner = _scan(f, r_peak, 0.5, want_positive=False)
    try:
        outer, fouter = _scan(f, r_peak, 2.0, want_positive=False)
    except BracketingError:
        raise BracketingError(f"potential does not confine at E={E}") from None
    r1 = brentq(f, inner, r_peak, fa=finner, fb=peak, xtol=0.0)
    r2 = brentq(f, r_peak, outer, fa=peak, fb=fouter, xtol=0.0)
    return TurningPoints(r1, r2)


def _check_convergent(problem: WkbProblem) -> None:
    if problem.centrifugal_coefficient < 0.0:
        raise PhaseDivergenceError(
            "with l = 0 and no Langer replacement q ~ hbar/(2r) near the origin, "
            "so the phase integral diverges logarithmically")


def _phase_between(problem: WkbProblem, E: float, a: float, b: float, rtol: float,
                   substitute: bool = True):
    """(1/hbar) int_a^b sqrt(max(q^2, 0)) dr, optionally with the sin^2 map anchored at a."""
    hbar = problem.params.hbar
    w = b - a

    if substitute:
        def integrand(theta):
            s = np.sin(theta)
            r = a + w * s * s
            r = np.maximum(r, np.finfo(float).tiny)
            q2 = _q2(problem, E, r)
            return np.sqrt(np.maximum(q2, 0.0)) * (w * np.sin(2.0 * theta)) / hbar

        return adaptive_gl(integrand, 0.0, 0.5 * math.pi, rtol=rtol)

    def plain(r):
        return np.sqrt(np.maximum(_q2(problem, E, r), 0.0)) / hbar

    return adaptive_gl(plain, a, b, rtol=rtol)


def phase_integral(problem: WkbProblem, E: float, *, rtol: float = 1e-12) -> PhaseResult:
    """Phi(E) = (1/hbar) int_{r1}^{r2} q dr."""
    _check_convergent(problem)
    tp = find_turning_points(problem, E)
    if tp.degenerate or tp.r2 <= tp.r1 + DEGENERATE_WIDTH:
        return PhaseResult(0.0, 0.0, 0, tp, degenerate=True)
    res = _phase_between(problem, E, tp.r1, tp.r2, rtol)
    rel_err = res.error / res.value if res.value > 0.0 else res.error
    return PhaseResult(res.value, rel_err, res.evaluations, tp)


def _phase_or_zero(problem: WkbProblem, E: float, rtol: float) -> float:
    try:
        return phase_integral(problem, E, rtol=rtol).phase
    except NoBoundRegionError:
        return 0.0


def _seed(problem: WkbProblem, n: int, e_min: float) -> tuple[float, float]:
    """Starting energy and initial bracket half-width."""
    if closed_form.has_closed_form(problem):
        seed = closed_form.closed_form_energy(problem, n)
        pot = problem.potential
        scale = abs(seed - e_min) if math.isfinite(e_min) else 0.5 * pot.q_e0
        return seed, 1e-3 * max(scale, abs(seed))
    # without a closed form, probe one phase value and use the large-n scaling
    # Phi ~ (E - E_min)^(1/2 + 1/p) with the pessimistic exponent 1/2
    if math.isfinite(e_min):
        probe = e_min + max(abs(e_min), 1.0)
    else:
        probe = 0.0
    phi = _phase_or_zero(problem, probe, 1e-8)
    target = (n - problem.maslov) * math.pi
    if phi <= 0.0 or not math.isfinite(e_min):
        return probe, max(abs(probe), 1.0)
    gap = (probe - e_min) * (target / phi) ** 2
    seed = e_min + min(gap, (probe - e_min) * 1e6)
    return seed, 0.5 * (seed - e_min)


def solve_level(problem: WkbProblem, n: int, *, rtol: float = 1e-13,
                phase_rtol: float = 1e-12) -> LevelSolution:
    """Energy E with Phi(E) = (n - maslov) * pi.

    Phi increases strictly with E above the bottom of the effective well, so
    the root is unique; it is bracketed by doubling around a seed and refined
    with Brent's method.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be an integer >= 1, got {n!r}")
    n = int(n)
    _check_convergent(problem)
    target = (n - problem.maslov) * math.pi
    e_min = effective_minimum(problem)
    calls = [0]

    def F(E):
        calls[0] += 1
        if math.isfinite(e_min) and E <= e_min:
            return -target
        return _phase_or_zero(problem, E, phase_rtol) - target

    seed, step = _seed(problem, n, e_min)
    a, fa, b, fb = expand_bracket(F, seed, step, lower=e_min)
    scale = max(abs(a), abs(b), b - a)
    energy = brentq(F, a, b, fa=fa, fb=fb, rtol=rtol, xtol=1e-15 * scale)
    pr = phase_integral(problem, energy, rtol=phase_rtol)
    return LevelSolution(n, energy, pr.phase, target, pr.turning_points, calls[0])


def solve_spectrum(problem: WkbProblem, levels: Sequence[int]) -> list[LevelSolution]:
    return [solve_level(problem, n) for n in levels]


@dataclass(frozen=True)
class WavefunctionSample:
    r: np.ndarray
    u: np.ndarray
    R: np.ndarray
    phase: np.ndarray
    valid: np.ndarray
    turning_points: TurningPoints


def wkb_wavefunction(problem: WkbProblem, E: float, grid, *, guard_fraction: float = 0.01,
                     rtol: float = 1e-11) -> WavefunctionSample:
    """u(r) = 2/sqrt(q) cos(Phi(r) - pi/4) and R = u/sqrt(r) inside the allowed region.

    Points within ``guard_fraction * (r2 - r1)`` of a turning point, or outside
    the allowed region, come back with ``valid == False`` and NaN values.
    """
    _check_convergent(problem)
    r = np.asarray(grid, dtype=float)
    tp = find_turning_points(problem, E)
    total = phase_integral(problem, E).phase
    frac = total / math.pi + problem.maslov
    if abs(frac - round(frac)) > 1e-6 or round(frac) < 1:
        warnings.warn(f"E={E} does not satisfy the quantization condition "
                      f"(Phi/pi + maslov = {frac:.9f})", RuntimeWarning, stacklevel=2)

    guard = guard_fraction * tp.width
    valid = (r > tp.r1 + guard) & (r < tp.r2 - guard) & (r > 0.0)
    if np.any(valid):
        valid[valid] = _q2(problem, E, r[valid]) > 0.0

    u = np.full(r.shape, np.nan)
    R = np.full(r.shape, np.nan)
    phase = np.full(r.shape, np.nan)
    idx = np.flatnonzero(valid)
    if idx.size:
        order = idx[np.argsort(r[idx])]
        acc = 0.0
        prev = tp.r1
        for k, i in enumerate(order):
            if k == 0:
                acc += _phase_between(problem, E, prev, r[i], rtol).value
            elif r[i] > prev:
                acc += _phase_between(problem, E, prev, r[i], rtol, substitute=False).value
            phase[i] = acc
            prev = r[i]
        q = np.sqrt(_q2(problem, E, r[idx]))
        u[idx] = 2.0 / np.sqrt(q) * np.cos(phase[idx] - 0.25 * math.pi)
        R[idx] = u[idx] / np.sqrt(r[idx])
    return WavefunctionSample(r, u, R, phase, valid, tp)


def count_sign_changes(values) -> int:
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v) & (v != 0.0)]
    return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


__all__ = [
    "EffectivePotential",
    "LevelSolution",
    "PhaseResult",
    "TurningPoints",
    "WavefunctionSample",
    "count_sign_changes",
    "effective_minimum",
    "find_turning_points",
    "local_momentum_sq",
    "phase_integral",
    "solve_level",
    "solve_spectrum",
    "wkb_wavefunction",
]
