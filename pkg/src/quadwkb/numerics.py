"""Root finding and quadrature used by the WKB engine.

``brentq`` is the classic bisection/secant/inverse-quadratic hybrid; it only
ever shrinks a sign-change bracket so it cannot escape it. ``adaptive_gl``
integrates with fixed-order Gauss-Legendre panels, splitting the worst panel
until the error estimate meets the tolerance, which lets it grade panels
toward integrable endpoint singularities without being told where they are.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import BracketingError, QuadratureToleranceError, SolverError

_EPS = np.finfo(float).eps


def brentq(f: Callable[[float], float], a: float, b: float, *, xtol: float = 1e-14,
           rtol: float = 4 * _EPS, maxiter: int = 200, fa: float | None = None,
           fb: float | None = None) -> float:
    """Root of ``f`` inside the sign-change bracket [a, b]."""
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BracketingError(f"f(a) and f(b) have the same sign on [{a}, {b}]")

    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if math.copysign(1.0, fb) == math.copysign(1.0, fc):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol = 2.0 * rtol * abs(b) + 0.5 * xtol
        m = 0.5 * (c - b)
        if abs(m) <= tol or fb == 0.0:
            return b
        if abs(e) >= tol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * m * q - abs(tol * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b += d if abs(d) > tol else math.copysign(tol, m)
        fb = f(b)
    raise SolverError(f"brentq did not converge in {maxiter} iterations (last bracket [{b}, {c}])")


def expand_bracket(f: Callable[[float], float], x0: float, step: float, *,
                   lower: float = -math.inf, upper: float = math.inf,
                   increasing: bool = True, maxiter: int = 200) -> tuple[float, float, float, float]:
    """Grow [x0 - step, x0 + step] by doubling until ``f`` changes sign.

    ``f`` must be monotone (direction given by ``increasing``). Returns
    ``(a, fa, b, fb)`` with ``f(a)`` and ``f(b)`` of opposite sign or zero.
    Hard limits ``lower``/``upper`` are used as-is once the expansion hits them.
    """
    if step <= 0.0:
        raise BracketingError("step must be positive")
    sign = 1.0 if increasing else -1.0
    a = max(x0 - step, lower)
    b = min(x0 + step, upper)
    fa, fb = sign * f(a), sign * f(b)
    width = step
    for _ in range(maxiter):
        if fa <= 0.0 <= fb:
            return a, sign * fa, b, sign * fb
        width *= 2.0
        if fa > 0.0:
            if a == lower:
                break
            b, fb = a, fa
            a = max(a - width, lower)
            fa = sign * f(a)
        else:
            if b == upper:
                break
            a, fa = b, fb
            b = min(b + width, upper)
            fb = sign * f(b)
    raise BracketingError(f"no sign change found around x0={x0} (last interval [{a}, {b}])")


@lru_cache(maxsize=8)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    evaluations: int
    panels: int


def _panel(f, a, b, nodes, weights):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(weights, f(mid + half * nodes)))


def adaptive_gl(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, *,
                rtol: float = 1e-12, atol: float = 0.0, order: int = 20,
                max_panels: int = 4000, initial_panels: int = 4) -> QuadResult:
    """Integrate a vectorised ``f`` over [a, b].

    Each panel's error is estimated as the difference between its own
    Gauss-Legendre sum and the sum over its two halves. The panel with the
    largest estimate is split until the total estimate drops below
    ``max(atol, rtol * |I|)``.
    """
    nodes, weights = gauss_legendre(order)
    if b == a:
        return QuadResult(0.0, 0.0, 0, 0)
    edges = np.linspace(a, b, initial_panels + 1)
    heap: list[tuple[float, float, float, float]] = []
    evals = 0
    total = 0.0
    total_err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        coarse = _panel(f, lo, hi, nodes, weights)
        fine = _panel(f, lo, mid, nodes, weights) + _panel(f, mid, hi, nodes, weights)
        evals += 3 * order
        err = abs(fine - coarse)
        heapq.heappush(heap, (-err, lo, hi, fine))
        total += fine
        total_err += err
    panels = initial_panels
    while total_err > max(atol, rtol * abs(total)):
        if panels >= max_panels:
            raise QuadratureToleranceError(
                f"adaptive quadrature exceeded {max_panels} panels "
                f"(estimate {total!r}, error {total_err:.3e})", total, total_err)
        neg_err, lo, hi, fine = heapq.heappop(heap)
        total -= fine
        total_err += neg_err
        mid = 0.5 * (lo + hi)
        for plo, phi in ((lo, mid), (mid, hi)):
            pm = 0.5 * (plo + phi)
            coarse = _panel(f, plo, phi, nodes, weights)
            sub = _panel(f, plo, pm, nodes, weights) + _panel(f, pm, phi, nodes, weights)
            evals += 3 * order
            err = abs(sub - coarse)
            heapq.heappush(heap, (-err, plo, phi, sub))
            total += sub
            total_err += err
        panels += 1
    # re-sum to shed accumulated round-off from the running totals
    value = math.fsum(item[3] for item in heap)
    err = math.fsum(-item[0] for item in heap)
    return QuadResult(value, err, evals, panels)
