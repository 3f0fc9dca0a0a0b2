"""Finite-difference reference solver for the reduced radial equation.

    -(hbar^2 / 2m) u'' + [V(r) + L hbar^2 / (2 m r^2)] u = E u,   u(0) = u(r_max) = 0

Second-order central differences on a uniform grid give a symmetric
tridiagonal matrix. Its lowest eigenvalues come from Sturm-sequence bisection,
repeated on grids with h, h/2, ... and combined by Richardson extrapolation.
Nothing here uses the WKB phase integral except the sizing of the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from .core import PhysicalParams, WkbProblem
from .errors import DomainTooSmallError, InvalidParameterError, NumericalFailureError
from .numerics import adaptive_gl
from .wkb import count_sign_changes, find_turning_points, local_momentum_sq, solve_level

# first ten zeros of Ai, negated; from mpmath.airyaizero at 30 digits
AIRY_ZEROS = (
    2.3381074104597670385,
    4.0879494441309706166,
    5.5205598280955510591,
    6.7867080900717589988,
    7.9441335871208531231,
    9.0226508533409803802,
    10.040174341558085931,
    11.008524303733262893,
    11.936015563236262517,
    12.828776752865757200,
)

TAIL_TOLERANCE = 1e-6
DECAY_EXPONENT = 20.0


@dataclass(frozen=True)
class OracleConfig:
    grid_points: int = 4000
    r_max_factor: float = 2.0
    levels: int = 5
    refinement_levels: int = 2
    langer_modified: bool | None = None  # None: follow the problem
    r_max: float | None = None  # explicit domain end, overrides the factor

    def __post_init__(self):
        if self.grid_points < 100:
            raise InvalidParameterError("grid_points must be >= 100")
        if not self.r_max_factor >= 1.5:
            raise InvalidParameterError("r_max_factor must be >= 1.5")
        if self.levels < 1:
            raise InvalidParameterError("levels must be >= 1")
        if self.refinement_levels < 1:
            raise InvalidParameterError("refinement_levels must be >= 1")
        if self.r_max is not None and not self.r_max > 0.0:
            raise InvalidParameterError("r_max must be positive")


@dataclass(frozen=True)
class OracleSpectrum:
    eigenvalues: np.ndarray
    node_counts: list[int]
    convergence_estimate: np.ndarray
    r_max: float
    grid_sizes: tuple[int, ...]
    raw: np.ndarray = field(repr=False)  # raw[k, j]: level j on grid k
    tail_ratio: np.ndarray = field(repr=False)


def airy_reference_linear(n: int, params: PhysicalParams, mu_q: float) -> float:
    """Exact hard-wall level of the linear well: |a_n| (hbar^2 (mu Q)^2 / 2m)^(1/3)."""
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= len(AIRY_ZEROS):
        raise InvalidParameterError(f"n must be in 1..{len(AIRY_ZEROS)}, got {n!r}")
    if not mu_q > 0.0:
        raise InvalidParameterError("mu*Q must be positive")
    return AIRY_ZEROS[int(n) - 1] * (params.hbar**2 * mu_q**2 / (2.0 * params.mass)) ** (1.0 / 3.0)


def tridiagonal(problem: WkbProblem, r_max: float, n_points: int, langer: bool) -> tuple[np.ndarray, float, np.ndarray]:
    """Diagonal, constant off-diagonal, and the interior grid r_i = i h, i = 1..N."""
    p = problem.params
    L = float(problem.l**2) if langer else problem.l**2 - 0.25
    h = r_max / (n_points + 1)
    r = h * np.arange(1, n_points + 1)
    kin = p.hbar**2 / (2.0 * p.mass)
    diag = 2.0 * kin / h**2 + np.asarray(problem.potential.value(r), dtype=float) + L * kin / r**2
    return diag, -kin / h**2, r


def sturm_count(diag, off_sq: float, x: float, pivmin: float) -> int:
    """Number of eigenvalues below x (LDL^T inertia of T - x I)."""
    count = 0
    d = diag[0] - x
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0.0:
        count += 1
    for a in diag[1:]:
        d = (a - x) - off_sq / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0.0:
            count += 1
    return count


def lowest_eigenvalues(diag: np.ndarray, off: float, k: int) -> np.ndarray:
    """k smallest eigenvalues of the constant-off-diagonal tridiagonal matrix by bisection."""
    n = diag.size
    if k > n:
        raise InvalidParameterError("more levels requested than grid points")
    dl = diag.tolist()
    off_sq = off * off
    pivmin = max(off_sq, 1.0) * np.finfo(float).tiny * 1e3
    g_lo = float(diag.min()) - 2.0 * abs(off)
    g_hi = float(diag.max()) + 2.0 * abs(off)
    lower = [g_lo] * k
    upper = [g_hi] * k
    out = np.empty(k)
    for j in range(k):
        lo, hi = max(lower[j], out[j - 1] if j else g_lo), upper[j]
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            c = sturm_count(dl, off_sq, mid, pivmin)
            # one count narrows every level's bracket at once
            for i in range(j, k):
                if i < c:
                    if mid < upper[i]:
                        upper[i] = mid
                elif mid > lower[i]:
                    lower[i] = mid
            if c > j:
                hi = mid
            else:
                lo = mid
        out[j] = hi
    if np.any(np.diff(out) <= 0.0):
        raise NumericalFailureError("Sturm bisection produced non-increasing eigenvalues")
    return out


def eigenvector(diag: np.ndarray, off: float, value: float, iterations: int = 3) -> np.ndarray:
    """Inverse iteration on (T - value I)."""
    n = diag.size
    shift = value + 1e-12 * max(abs(value), 1.0)
    ab = np.empty((3, n))
    ab[0, :] = off
    ab[1, :] = diag - shift
    ab[2, :] = off
    v = np.ones(n) / math.sqrt(n)
    for _ in range(iterations):
        v = solve_banded((1, 1), ab, v, check_finite=False)
        v /= np.linalg.norm(v)
    return v


def richardson(table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Extrapolate rows of h, h/2, h/4... values assuming an h^2, h^4, ... expansion.

    Returns the extrapolated values and |last - previous| / |last| as the error estimate.
    """
    col = [row for row in table]
    finest = [col[-1]]
    for j in range(1, len(col)):
        factor = 4.0**j
        col = [col[i] + (col[i] - col[i - 1]) / (factor - 1.0) for i in range(1, len(col))]
        finest.append(col[-1])
    best = finest[-1]
    if len(finest) == 1:
        return best, np.full(best.shape, np.nan)
    ref = np.where(best != 0.0, np.abs(best), 1.0)
    return best, np.abs(best - finest[-2]) / ref


def _barrier(problem: WkbProblem, E: float, a: float, b: float) -> float:
    """WKB decay exponent int_a^b |q| dr / hbar across a forbidden stretch."""
    def kappa(r):
        return np.sqrt(np.maximum(-local_momentum_sq(problem, E, r), 0.0))

    return adaptive_gl(kappa, a, b, rtol=1e-6).value / problem.params.hbar


def estimate_domain(problem: WkbProblem, levels: int, factor: float) -> float:
    """Outer edge of the oracle grid from a quick WKB estimate of the highest requested level.

    The edge sits at ``factor`` times the outer turning point, pushed further
    out if needed so the level decays by at least exp(-DECAY_EXPONENT) there.
    """
    est = problem.with_(maslov=0.25)
    if est.centrifugal_coefficient < 0.0:
        est = est.with_(langer_modified=True)
    sol = solve_level(est, levels)
    r2 = find_turning_points(est, sol.energy).r2
    r_max = factor * r2
    for _ in range(200):
        if _barrier(est, sol.energy, r2, r_max) >= DECAY_EXPONENT:
            break
        r_max *= 1.25
    return r_max


def exact_spectrum(problem: WkbProblem, config: OracleConfig = OracleConfig()) -> OracleSpectrum:
    langer = problem.langer_modified if config.langer_modified is None else config.langer_modified
    r_max = config.r_max or estimate_domain(problem, config.levels, config.r_max_factor)
    sizes = tuple((config.grid_points + 1) * 2**i - 1 for i in range(config.refinement_levels))
    raw = np.empty((len(sizes), config.levels))
    for i, n_points in enumerate(sizes):
        diag, off, r = tridiagonal(problem, r_max, n_points, langer)
        raw[i] = lowest_eigenvalues(diag, off, config.levels)

    values, conv = richardson(raw)
    if np.any(np.diff(values) <= 0.0):
        raise NumericalFailureError("extrapolated eigenvalues are not strictly increasing")

    nodes = []
    tails = np.empty(config.levels)
    for j in range(config.levels):
        v = eigenvector(diag, off, raw[-1, j])
        peak = np.max(np.abs(v))
        tails[j] = abs(v[-1]) / peak
        significant = np.where(np.abs(v) > 1e-10 * peak, v, 0.0)
        nodes.append(count_sign_changes(significant))
    if np.any(tails > TAIL_TOLERANCE):
        worst = int(np.argmax(tails))
        raise DomainTooSmallError(
            f"level {worst + 1} has not decayed at r_max={r_max:.6g} "
            f"(|u(r_max - h)| / max|u| = {tails[worst]:.2e}); enlarge the domain")
    return OracleSpectrum(values, nodes, conv, r_max, sizes, raw, tails)
