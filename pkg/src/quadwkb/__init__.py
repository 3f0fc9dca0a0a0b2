"""Semiclassical bound states of a quadrupole moment in radial fields of charged cylinders."""

from .closed_form import (
    ClosedFormVariant,
    analytic_phase,
    cubic_energy,
    gamma_value,
    linear_energy,
    log_energy,
)
from .core import (
    Cubic,
    EffectivePotential,
    Linear,
    Logarithmic,
    PhysicalParams,
    PowerLaw,
    QuadrupoleTensor,
    WkbProblem,
    axial_shift,
    potential_derivative,
    preset_potential,
)
from .electrostatics import field_from_density, quadrupole_coupling
from .oracle import OracleConfig, airy_reference_linear, exact_spectrum
from .wkb import find_turning_points, local_momentum_sq, phase_integral, solve_level, wkb_wavefunction

__version__ = "0.1.0"
