"""Physical parameters, quadrupole tensor, effective potentials and the WKB problem record.

Everything here is immutable. Potentials store the quadrupole constant already
multiplied into their coupling (``mu_q`` is the product Q*mu and so on), so the
rest of the package never needs to know about Q separately.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, InvalidParameterError, UnsupportedConfigurationError

ArrayLike = Union[float, np.ndarray]

_MASLOV_PRESETS = (0.25, 0.5)


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidParameterError(f"{name} must be a finite positive number, got {value!r}")
    return value


def _radii(r: ArrayLike, *, allow_zero: bool) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    bad = arr < 0.0 if allow_zero else arr <= 0.0
    if np.any(bad) or np.any(np.isnan(arr)):
        bound = "r >= 0" if allow_zero else "r > 0"
        raise DomainError(f"potential evaluated outside {bound}")
    return arr


def _out(arr: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(arr) if np.ndim(like) == 0 else arr


@dataclass(frozen=True)
class PhysicalParams:
    """Particle constants in reduced units (hbar = m = 1 unless overridden).

    ``energy_unit`` and ``length_unit`` only rescale reported numbers; all
    internal arithmetic stays in the units the constants were given in.
    """

    hbar: float = 1.0
    mass: float = 1.0
    k: float = 0.0
    energy_unit: float = 1.0
    length_unit: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "energy_unit", "length_unit"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        k = float(self.k)
        if not math.isfinite(k):
            raise InvalidParameterError("k must be finite")
        object.__setattr__(self, "k", k)

    def to_output_energy(self, energy: float) -> float:
        return energy * self.energy_unit

    def to_output_length(self, length: float) -> float:
        return length * self.length_unit


def axial_shift(params: PhysicalParams, radial_energy: float) -> float:
    """Total energy for a radial eigenvalue once the free z motion is added back."""
    return radial_energy + params.hbar**2 * params.k**2 / (2.0 * params.mass)


@dataclass(frozen=True)
class QuadrupoleTensor:
    """Diagonal quadrupole tensor in cylindrical components.

    ``off_diagonal`` holds (rphi, rz, phiz); it exists so that callers can
    describe a general tensor and get a clear refusal from the coupling code.
    """

    q_rr: float
    q_phiphi: float
    q_zz: float
    off_diagonal: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        comps = (self.q_rr, self.q_phiphi, self.q_zz)
        if not all(math.isfinite(c) for c in comps):
            raise InvalidParameterError("tensor components must be finite")
        scale = max(abs(c) for c in comps)
        if abs(sum(comps)) > 1e-12 * max(scale, 1e-300):
            raise InvalidParameterError(f"quadrupole tensor must be traceless, trace = {sum(comps)!r}")

    @classmethod
    def axial(cls, Q: float) -> "QuadrupoleTensor":
        """The configuration Q_rr = Q_phiphi = -Q, Q_zz = 2Q with Q > 0."""
        Q = _positive("Q", Q)
        return cls(-Q, -Q, 2.0 * Q)

    @property
    def trace(self) -> float:
        return self.q_rr + self.q_phiphi + self.q_zz

    @property
    def is_diagonal(self) -> bool:
        return all(c == 0.0 for c in self.off_diagonal)


class EffectivePotential(ABC):
    """Radial potential V(r) on r > 0."""

    kind: str = "generic"

    @abstractmethod
    def value(self, r: ArrayLike) -> ArrayLike: ...

    @abstractmethod
    def derivative(self, r: ArrayLike) -> ArrayLike: ...

    def __call__(self, r: ArrayLike) -> ArrayLike:
        return self.value(r)

    @property
    def infimum(self) -> float:
        """inf of V over r > 0."""
        return 0.0

    @property
    def confining(self) -> bool:
        return True


@dataclass(frozen=True)
class Linear(EffectivePotential):
    """V(r) = (Q mu) r."""

    mu_q: float
    kind = "linear"

    def __post_init__(self):
        object.__setattr__(self, "mu_q", _positive("Q*mu", self.mu_q))

    def value(self, r):
        return _out(self.mu_q * _radii(r, allow_zero=True), r)

    def derivative(self, r):
        arr = _radii(r, allow_zero=False)
        return _out(np.full_like(arr, self.mu_q), r)


@dataclass(frozen=True)
class Cubic(EffectivePotential):
    """V(r) = (Q nu) r^3."""

    nu_q: float
    kind = "cubic"

    def __post_init__(self):
        object.__setattr__(self, "nu_q", _positive("Q*nu", self.nu_q))

    def value(self, r):
        return _out(self.nu_q * _radii(r, allow_zero=True) ** 3, r)

    def derivative(self, r):
        return _out(3.0 * self.nu_q * _radii(r, allow_zero=False) ** 2, r)


@dataclass(frozen=True)
class Logarithmic(EffectivePotential):
    """V(r) = (Q E0 / 2) [ln(r/r0) - 1/2]; attractive and unbounded below at r -> 0."""

    q_e0: float
    r0: float
    kind = "log"

    def __post_init__(self):
        object.__setattr__(self, "q_e0", _positive("Q*E0", self.q_e0))
        object.__setattr__(self, "r0", _positive("r0", self.r0))

    def value(self, r):
        arr = _radii(r, allow_zero=False)
        return _out(0.5 * self.q_e0 * (np.log(arr / self.r0) - 0.5), r)

    def derivative(self, r):
        return _out(0.5 * self.q_e0 / _radii(r, allow_zero=False), r)

    def shifted_energy(self, energy: float) -> float:
        """E + Q E0 / 4, the energy measured from V(r0) + Q E0/4."""
        return energy + 0.25 * self.q_e0

    @property
    def infimum(self) -> float:
        return -math.inf


@dataclass(frozen=True)
class PowerLaw(EffectivePotential):
    """V(r) = A r^p with the quadrupole constant already inside A."""

    a: float
    p: float
    kind = "power"

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("A", self.a))
        # p = 0 would be a constant offset, not a confining well
        object.__setattr__(self, "p", _positive("p", self.p))

    def value(self, r):
        return _out(self.a * _radii(r, allow_zero=True) ** self.p, r)

    def derivative(self, r):
        arr = _radii(r, allow_zero=False)
        return _out(self.a * self.p * arr ** (self.p - 1.0), r)


_ALIASES = {
    "linear": "linear",
    "cubic": "cubic",
    "log": "log",
    "logarithmic": "log",
    "power": "power",
    "powerlaw": "power",
}


def preset_potential(variant: str, constants: Sequence[float], Q: float = 1.0) -> EffectivePotential:
    """Build one of the effective potentials from its field constants.

    ``constants`` is ``[mu]``, ``[nu]``, ``[E0, r0]`` or ``[A, p]``. For the
    power law, A is the full coupling and Q is only validated.
    """
    Q = _positive("Q", Q)
    try:
        tag = _ALIASES[variant.lower()]
    except KeyError:
        raise InvalidParameterError(f"unknown potential variant {variant!r}") from None
    c = [float(v) for v in constants]
    expected = {"linear": 1, "cubic": 1, "log": 2, "power": 2}[tag]
    if len(c) != expected:
        raise InvalidParameterError(f"{tag} potential takes {expected} constant(s), got {len(c)}")
    if tag == "linear":
        return Linear(Q * _positive("mu", c[0]))
    if tag == "cubic":
        return Cubic(Q * _positive("nu", c[0]))
    if tag == "log":
        return Logarithmic(Q * _positive("E0", c[0]), _positive("r0", c[1]))
    return PowerLaw(_positive("A", c[0]), c[1])


def potential_derivative(potential: EffectivePotential, r: ArrayLike) -> ArrayLike:
    return potential.derivative(r)


@dataclass(frozen=True)
class WkbProblem:
    """A fully specified quantization task.

    ``maslov`` is the constant subtracted from n in the quantization rule; 1/2
    for the cylindrical s-wave rule, 1/4 for a hard wall at the origin.
    """

    params: PhysicalParams
    potential: EffectivePotential
    l: int = 0
    langer_modified: bool = True
    maslov: float = 0.5

    def __post_init__(self):
        if isinstance(self.l, bool) or int(self.l) != self.l or self.l < 0:
            raise InvalidParameterError(f"l must be a non-negative integer (pass |l|), got {self.l!r}")
        object.__setattr__(self, "l", int(self.l))
        m = float(self.maslov)
        if m not in _MASLOV_PRESETS and not 0.0 < m < 1.0:
            raise InvalidParameterError(f"maslov must lie in (0, 1), got {m!r}")
        object.__setattr__(self, "maslov", m)
        if not isinstance(self.potential, EffectivePotential):
            raise UnsupportedConfigurationError("potential must be an EffectivePotential")

    @property
    def centrifugal_coefficient(self) -> float:
        """l^2 with the Langer replacement, l^2 - 1/4 without it."""
        return float(self.l**2) if self.langer_modified else self.l**2 - 0.25

    def with_(self, **changes) -> "WkbProblem":
        return replace(self, **changes)
