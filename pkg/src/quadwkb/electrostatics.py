"""Radial fields of charged cylinders and their coupling to the quadrupole tensor.

Gauss's law in cylindrical symmetry is used with its normalization constant
set to one::

    E_r(r) = (1/r) * int_0^r rho(s) s ds

so that (1/r) d(r E_r)/dr = rho. With this convention the logarithmic density
E0 ln(r/r0) gives exactly E0 r [ln(r/r0)/2 - 1/4], while the power-law
densities mu_bar r and nu_bar r^3 give (mu/2) r^2 and (nu/2) r^4 with
mu = 2 mu_bar / 3 and nu = 2 nu_bar / 5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .core import ArrayLike, EffectivePotential, QuadrupoleTensor, _out, _positive, _radii
from .errors import DomainError, InvalidParameterError, UnsupportedConfigurationError
from .numerics import adaptive_gl


@dataclass(frozen=True)
class PowerLawDensity:
    """rho(r) = c r^p."""

    c: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "c", _positive("c", self.c))
        if not self.p >= 0.0:
            raise InvalidParameterError(f"p must be >= 0, got {self.p!r}")

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return _out(self.c * _radii(r, allow_zero=False) ** self.p, r)


@dataclass(frozen=True)
class LogDensity:
    """rho(r) = E0 ln(r/r0)."""

    e0: float
    r0: float

    def __post_init__(self):
        object.__setattr__(self, "e0", _positive("E0", self.e0))
        object.__setattr__(self, "r0", _positive("r0", self.r0))

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return _out(self.e0 * np.log(_radii(r, allow_zero=False) / self.r0), r)


@dataclass(frozen=True)
class CustomDensity:
    """Any vectorised rho(r) that is integrable against s ds near the axis."""

    rho: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return _out(np.asarray(self.rho(_radii(r, allow_zero=False)), dtype=float), r)


ChargeDensityProfile = Union[PowerLawDensity, LogDensity, CustomDensity]


def linear_case_density(mu: float) -> PowerLawDensity:
    """Density whose field is (mu/2) r^2."""
    return PowerLawDensity(1.5 * _positive("mu", mu), 1.0)


def cubic_case_density(nu: float) -> PowerLawDensity:
    """Density whose field is (nu/2) r^4."""
    return PowerLawDensity(2.5 * _positive("nu", nu), 3.0)


@dataclass(frozen=True)
class RadialField:
    """E_r(r) with its radial derivative; ``source`` names what produced it."""

    evaluate: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray]
    source: str

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return _out(np.asarray(self.evaluate(_radii(r, allow_zero=False)), dtype=float), r)

    def derivative(self, r: ArrayLike) -> ArrayLike:
        return _out(np.asarray(self.gradient(_radii(r, allow_zero=False)), dtype=float), r)


def power_field(coefficient: float, power: float, source: str = "power") -> RadialField:
    """E_r = coefficient * r^power, e.g. (1/2) mu r^2 for the linear case."""
    if not math.isfinite(coefficient):
        raise InvalidParameterError("field coefficient must be finite")
    return RadialField(
        lambda r: coefficient * r**power,
        lambda r: coefficient * power * r ** (power - 1.0),
        source,
    )


def log_field(e0: float, r0: float) -> RadialField:
    """E_r = E0 r [ln(r/r0)/2 - 1/4]."""
    _positive("E0", e0)
    _positive("r0", r0)
    return RadialField(
        lambda r: e0 * r * (0.5 * np.log(r / r0) - 0.25),
        lambda r: e0 * (0.5 * np.log(r / r0) + 0.25),
        f"log(E0={e0:g}, r0={r0:g})",
    )


def enclosed_charge(profile: ChargeDensityProfile, r: float) -> float:
    """int_0^r rho(s) s ds, analytic for the built-in profiles."""
    if not r > 0.0:
        raise DomainError("enclosed charge needs r > 0")
    if isinstance(profile, PowerLawDensity):
        return profile.c * r ** (profile.p + 2.0) / (profile.p + 2.0)
    if isinstance(profile, LogDensity):
        return profile.e0 * r * r * (0.5 * math.log(r / profile.r0) - 0.25)
    # s*ln(s)-type behaviour at the axis is fine for the adaptive panels
    return adaptive_gl(lambda s: np.asarray(profile.rho(np.maximum(s, 1e-300))) * s, 0.0, r,
                       rtol=1e-13).value


def field_from_density(profile: ChargeDensityProfile) -> RadialField:
    """Field of an infinite cylinder with the given radial charge density."""
    if isinstance(profile, PowerLawDensity):
        c, p = profile.c, profile.p
        return RadialField(
            lambda r: c * r ** (p + 1.0) / (p + 2.0),
            lambda r: c * (p + 1.0) / (p + 2.0) * r**p,
            f"density c*r^p (c={c:g}, p={p:g})",
        )
    if isinstance(profile, LogDensity):
        return log_field(profile.e0, profile.r0)
    if isinstance(profile, CustomDensity):
        def evaluate(r):
            arr = np.atleast_1d(r)
            vals = np.array([enclosed_charge(profile, float(x)) / x for x in arr.ravel()])
            return vals.reshape(arr.shape) if np.ndim(r) else vals[0]

        # Gauss's law in differential form: dE/dr = rho - E/r
        return RadialField(evaluate, lambda r: profile.rho(r) - evaluate(r) / r, profile.name)
    raise UnsupportedConfigurationError(f"unknown density profile {profile!r}")


@dataclass(frozen=True)
class FieldCoupledPotential(EffectivePotential):
    """V(r) = -q_rr dE_r/dr for a diagonal tensor and a purely radial field."""

    q_rr: float
    field: RadialField
    kind = "coupled"

    def value(self, r):
        if self.q_rr == 0.0:
            return _out(np.zeros_like(_radii(r, allow_zero=False)), r)
        return -self.q_rr * self.field.derivative(r)

    def derivative(self, r, h: float = 1e-5):
        arr = _radii(r, allow_zero=False)
        step = h * np.maximum(arr, 1e-3)
        step = np.minimum(step, 0.5 * arr)
        lo = np.asarray(self.value(arr - step))
        hi = np.asarray(self.value(arr + step))
        return _out((hi - lo) / (2.0 * step), r)

    @property
    def infimum(self) -> float:
        return -math.inf

    @property
    def confining(self) -> bool:
        return False


def quadrupole_coupling(tensor: QuadrupoleTensor, field: RadialField) -> FieldCoupledPotential:
    """Effective potential -q_rr * dE_r/dr of a quadrupole in a radial field.

    With the axial tensor (-Q, -Q, 2Q) and E_r = (mu/2) r^2 this is Q mu r.
    For the (nu/2) r^4 field it gives 2 Q nu r^3 and for the logarithmic field
    Q E0 [ln(r/r0)/2 + 1/4]; the preset potentials in ``core`` keep the
    conventional forms and are the ones used for spectra.
    """
    if not tensor.is_diagonal:
        raise UnsupportedConfigurationError("only diagonal quadrupole tensors couple to a radial field here")
    return FieldCoupledPotential(tensor.q_rr, field)
