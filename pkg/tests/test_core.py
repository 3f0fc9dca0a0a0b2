import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadwkb.core import (
    Cubic,
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
from quadwkb.errors import DomainError, InvalidParameterError

PRESETS = [
    preset_potential("linear", [1.3], Q=0.7),
    preset_potential("cubic", [0.4], Q=2.0),
    preset_potential("log", [1.5, 0.8], Q=1.2),
    preset_potential("power", [0.5, 2.0]),
    preset_potential("power", [2.0, 0.5]),
]


@pytest.mark.parametrize(
    "variant, constants, r, expected",
    [
        ("linear", [1.0], 2.0, 2.0),
        ("log", [1.0, 1.0], 1.0, -0.25),
        ("cubic", [1.0], 2.0, 8.0),
    ],
)
def test_preset_values(variant, constants, r, expected):
    assert preset_potential(variant, constants, Q=1.0)(r) == pytest.approx(expected, abs=1e-15)


def test_q_is_folded_into_constants():
    assert preset_potential("linear", [2.0], Q=3.0).mu_q == 6.0
    assert preset_potential("cubic", [2.0], Q=3.0).nu_q == 6.0
    pot = preset_potential("log", [2.0, 0.5], Q=3.0)
    assert (pot.q_e0, pot.r0) == (6.0, 0.5)


@pytest.mark.parametrize(
    "variant, constants, Q",
    [
        ("linear", [0.0], 1.0),
        ("linear", [-1.0], 1.0),
        ("cubic", [1.0], 0.0),
        ("log", [1.0, 0.0], 1.0),
        ("log", [1.0, -2.0], 1.0),
        ("log", [-1.0, 1.0], 1.0),
        ("power", [1.0, 0.0], 1.0),
        ("linear", [1.0, 2.0], 1.0),
        ("quartic", [1.0], 1.0),
    ],
)
def test_invalid_presets(variant, constants, Q):
    with pytest.raises(InvalidParameterError):
        preset_potential(variant, constants, Q)


def test_derivative_examples():
    assert potential_derivative(Linear(1.0), 3.7) == 1.0
    assert potential_derivative(Cubic(1.0), 1.0) == 3.0
    assert potential_derivative(Logarithmic(2.0, 1.0), 4.0) == pytest.approx(0.25, rel=1e-15)


@pytest.mark.parametrize("pot", PRESETS)
def test_derivative_rejects_nonpositive_r(pot):
    with pytest.raises(DomainError):
        potential_derivative(pot, 0.0)
    with pytest.raises(DomainError):
        potential_derivative(pot, -1.0)


def test_log_potential_domain_and_shift():
    pot = Logarithmic(1.0, 1.0)
    with pytest.raises(DomainError):
        pot(0.0)
    assert pot.shifted_energy(-0.25) == 0.0
    assert pot.infimum == -math.inf
    assert pot(1e-300) < -100


def test_power_presets_vanish_at_origin():
    for pot in (Linear(2.0), Cubic(2.0), PowerLaw(3.0, 1.7)):
        assert pot(0.0) == 0.0


def test_array_evaluation_matches_scalar():
    r = np.linspace(0.1, 4.0, 7)
    for pot in PRESETS:
        np.testing.assert_array_equal(pot(r), [pot(float(x)) for x in r])


@settings(max_examples=200, deadline=None)
@given(
    idx=st.integers(0, len(PRESETS) - 1),
    a=st.floats(1e-3, 50.0),
    gap=st.floats(1e-6, 50.0),
)
def test_presets_strictly_increasing(idx, a, gap):
    pot = PRESETS[idx]
    assert pot(a + gap) > pot(a)


@settings(max_examples=200, deadline=None)
@given(idx=st.integers(0, len(PRESETS) - 1), r=st.floats(0.1, 10.0))
def test_derivative_matches_central_difference(idx, r):
    pot = PRESETS[idx]
    h = 1e-5 * r
    fd = (pot(r + h) - pot(r - h)) / (2 * h)
    exact = potential_derivative(pot, r)
    assert abs(fd - exact) / abs(exact) < 1e-6


@pytest.mark.parametrize(
    "hbar, mass, k, E, expected",
    [(1.0, 1.0, 0.0, 1.5, 1.5), (1.0, 1.0, 2.0, 0.0, 2.0), (2.0, 1.0, 1.0, 1.0, 3.0)],
)
def test_axial_shift(hbar, mass, k, E, expected):
    assert axial_shift(PhysicalParams(hbar=hbar, mass=mass, k=k), E) == expected


@pytest.mark.parametrize("kwargs", [dict(hbar=0.0), dict(mass=-1.0), dict(energy_unit=0.0),
                                    dict(length_unit=-2.0), dict(k=math.inf)])
def test_physical_params_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        PhysicalParams(**kwargs)


def test_output_scaling():
    p = PhysicalParams(energy_unit=2.0, length_unit=0.5)
    assert p.to_output_energy(3.0) == 6.0
    assert p.to_output_length(3.0) == 1.5


def test_axial_tensor_is_traceless():
    t = QuadrupoleTensor.axial(0.37)
    assert (t.q_rr, t.q_phiphi, t.q_zz) == (-0.37, -0.37, 0.74)
    assert t.trace == 0.0
    assert t.is_diagonal


def test_tensor_rejects_trace():
    with pytest.raises(InvalidParameterError):
        QuadrupoleTensor(1.0, 1.0, 1.0)
    with pytest.raises(InvalidParameterError):
        QuadrupoleTensor.axial(-1.0)


@pytest.mark.parametrize("l", range(0, 8))
def test_langer_toggle_shifts_centrifugal_by_quarter(l):
    on = WkbProblem(PhysicalParams(), Linear(1.0), l=l)
    off = on.with_(langer_modified=False)
    assert on.centrifugal_coefficient == l * l
    assert on.centrifugal_coefficient - off.centrifugal_coefficient == 0.25


@pytest.mark.parametrize("bad", [dict(l=-1), dict(l=1.5), dict(maslov=0.0), dict(maslov=1.0), dict(maslov=-0.2)])
def test_problem_validation(bad):
    with pytest.raises(InvalidParameterError):
        WkbProblem(PhysicalParams(), Linear(1.0), **bad)


def test_problem_accepts_maslov_override():
    assert WkbProblem(PhysicalParams(), Linear(1.0), maslov=0.3).maslov == 0.3


def test_types_are_immutable():
    pot = Linear(1.0)
    with pytest.raises(AttributeError):
        pot.mu_q = 2.0
    with pytest.raises(AttributeError):
        PhysicalParams().hbar = 2.0
