"""Closed-form s-wave spectra and phase integrals for the three field presets.

All formulas take the quantization constant ``maslov`` explicitly; with
``maslov = 1/2`` they are the published expressions. For the logarithmic
well two variants exist: the published one, and one re-solved from the
turning point and phase integral, which carries an extra factor 2 inside the
logarithm. Only the latter satisfies the quantization rule it came from.
"""

from __future__ import annotations

import enum
import math

from .core import Cubic, EffectivePotential, Linear, Logarithmic, PhysicalParams, WkbProblem
from .errors import DomainError, InvalidParameterError, UnsupportedConfigurationError


class ClosedFormVariant(enum.Enum):
    PUBLISHED_LINEAR = "linear"
    PUBLISHED_CUBIC = "cubic"
    PUBLISHED_LOG = "paper"
    REDERIVED_LOG = "rederived"


def gamma_value(x: float) -> float:
    """Gamma function for x > 0."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"gamma_value needs a finite x > 0, got {x!r}")
    return math.gamma(x)


def _check_level(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidParameterError(f"n must be an integer >= 1, got {n!r}")
    return int(n)


def _check_maslov(maslov: float) -> float:
    if not 0.0 < maslov < 1.0:
        raise InvalidParameterError(f"maslov must lie in (0, 1), got {maslov!r}")
    return float(maslov)


def _check_coupling(name: str, value: float) -> float:
    if not value > 0.0 or not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be positive, got {value!r}")
    return float(value)


def linear_energy(n: int, params: PhysicalParams, mu_q: float, maslov: float = 0.5) -> float:
    """E_n = (mu Q) * [9 hbar^2 pi^2 (n - maslov)^2 / (8 m mu Q)]^(1/3)."""
    n = _check_level(n)
    maslov = _check_maslov(maslov)
    mu_q = _check_coupling("mu*Q", mu_q)
    core = 9.0 * params.hbar**2 * math.pi**2 * (n - maslov) ** 2 / (8.0 * params.mass * mu_q)
    return mu_q * core ** (1.0 / 3.0)


def cubic_energy(n: int, params: PhysicalParams, nu_q: float, maslov: float = 0.5) -> float:
    n = _check_level(n)
    maslov = _check_maslov(maslov)
    nu_q = _check_coupling("nu*Q", nu_q)
    ratio = gamma_value(11.0 / 6.0) / gamma_value(1.0 / 3.0)
    base = 6.0 * params.hbar * (n - maslov) * math.sqrt(math.pi / (2.0 * params.mass)) * nu_q ** (1.0 / 3.0) * ratio
    return base ** 1.2


def log_energy(n: int, params: PhysicalParams, q_e0: float, r0: float,
               variant: ClosedFormVariant = ClosedFormVariant.REDERIVED_LOG,
               maslov: float = 0.5) -> float:
    """Logarithmic-well level, either as published or re-derived.

    The re-derived form follows from r2 = 2 hbar (n - maslov) sqrt(pi / (m Q E0))
    and E = (Q E0 / 2) ln(r2 / r0) - Q E0 / 4.
    """
    n = _check_level(n)
    maslov = _check_maslov(maslov)
    q_e0 = _check_coupling("Q*E0", q_e0)
    r0 = _check_coupling("r0", r0)
    if variant is ClosedFormVariant.PUBLISHED_LOG:
        factor = 1.0
    elif variant is ClosedFormVariant.REDERIVED_LOG:
        factor = 2.0
    else:
        raise UnsupportedConfigurationError(f"{variant} is not a logarithmic variant")
    arg = factor * params.hbar / r0 * math.sqrt(math.pi / (q_e0 * params.mass)) * (n - maslov)
    return 0.5 * q_e0 * math.log(arg) - 0.25 * q_e0


def log_variant_offset(q_e0: float) -> float:
    """Rederived minus published logarithmic level: (Q E0 / 2) ln 2 for every n."""
    return 0.5 * q_e0 * math.log(2.0)


def analytic_phase(potential: EffectivePotential, params: PhysicalParams, E: float) -> float:
    """Closed-form s-wave phase integral (1/hbar) * int_0^{r2} q dr."""
    hbar, m = params.hbar, params.mass
    if isinstance(potential, Linear):
        if E < 0.0:
            raise DomainError("energy below the bottom of the linear well")
        r2 = E / potential.mu_q
        return 2.0 / (3.0 * hbar) * math.sqrt(2.0 * m * potential.mu_q) * r2**1.5
    if isinstance(potential, Cubic):
        if E < 0.0:
            raise DomainError("energy below the bottom of the cubic well")
        return (math.sqrt(2.0 * m * math.pi) / (6.0 * hbar) * potential.nu_q ** (-1.0 / 3.0)
                * gamma_value(1.0 / 3.0) / gamma_value(11.0 / 6.0) * E ** (5.0 / 6.0))
    if isinstance(potential, Logarithmic):
        r2 = potential.r0 * math.exp(2.0 * potential.shifted_energy(E) / potential.q_e0)
        return r2 / hbar * math.sqrt(m * potential.q_e0) * math.sqrt(math.pi) / 2.0
    raise UnsupportedConfigurationError(f"no closed-form phase for {type(potential).__name__}")


def closed_form_energy(problem: WkbProblem, n: int,
                       log_variant: ClosedFormVariant = ClosedFormVariant.REDERIVED_LOG) -> float:
    """Dispatch on the problem's potential; only Langer-modified s waves have closed forms."""
    if problem.l != 0 or not problem.langer_modified:
        raise UnsupportedConfigurationError("closed forms exist only for Langer-modified s waves (l = 0)")
    pot, params, maslov = problem.potential, problem.params, problem.maslov
    if isinstance(pot, Linear):
        return linear_energy(n, params, pot.mu_q, maslov)
    if isinstance(pot, Cubic):
        return cubic_energy(n, params, pot.nu_q, maslov)
    if isinstance(pot, Logarithmic):
        return log_energy(n, params, pot.q_e0, pot.r0, log_variant, maslov)
    raise UnsupportedConfigurationError(f"no closed-form spectrum for {type(pot).__name__}")


def has_closed_form(problem: WkbProblem) -> bool:
    return (problem.l == 0 and problem.langer_modified
            and isinstance(problem.potential, (Linear, Cubic, Logarithmic)))
