import math

import numpy as np
import pytest

from quadwkb import electrostatics as es
from quadwkb.core import QuadrupoleTensor, preset_potential
from quadwkb.errors import DomainError, InvalidParameterError, UnsupportedConfigurationError


def test_log_field_value_at_e():
    field = es.field_from_density(es.LogDensity(1.0, 1.0))
    assert field(math.e) == pytest.approx(math.e / 4.0, rel=1e-15)
    assert field(math.e) == pytest.approx(0.67957, abs=5e-6)


def test_power_density_field_by_hand():
    field = es.field_from_density(es.PowerLawDensity(3.0, 1.0))
    assert field(2.0) == pytest.approx(4.0, rel=1e-15)


@pytest.mark.parametrize("c", [0.1, 1.0, 7.5])
@pytest.mark.parametrize("r", [0.01, 0.3, 2.0, 40.0])
def test_linear_density_field_is_quadratic(c, r):
    field = es.field_from_density(es.PowerLawDensity(c, 1.0))
    assert field(2 * r) / field(r) == pytest.approx(4.0, rel=1e-14)


def test_power_field_vanishes_on_axis():
    field = es.field_from_density(es.PowerLawDensity(2.0, 0.0))
    assert field(1e-12) < 1e-11


def test_case_densities_reproduce_conventional_fields():
    r = np.linspace(0.1, 3.0, 17)
    lin = es.field_from_density(es.linear_case_density(0.7))
    np.testing.assert_allclose(lin(r), 0.5 * 0.7 * r**2, rtol=1e-14)
    cub = es.field_from_density(es.cubic_case_density(0.7))
    np.testing.assert_allclose(cub(r), 0.5 * 0.7 * r**4, rtol=1e-14)


@pytest.mark.parametrize("e0, r0", [(1.0, 1.0), (2.5, 0.3), (0.2, 4.0)])
def test_log_field_matches_closed_expression(e0, r0):
    field = es.field_from_density(es.LogDensity(e0, r0))
    r = np.geomspace(1e-3, 50.0, 300)
    resid = field(r) / r - e0 * (0.5 * np.log(r / r0) - 0.25)
    assert np.max(np.abs(resid)) < 1e-12


def _density_from_field(field, r, h=1e-3):
    def flux(x):
        return x * field(x)

    d = (-flux(r + 2 * h) + 8 * flux(r + h) - 8 * flux(r - h) + flux(r - 2 * h)) / (12 * h)
    return d / r


@pytest.mark.parametrize(
    "profile",
    [
        es.PowerLawDensity(1.0, 1.0),
        es.PowerLawDensity(2.0, 3.0),
        es.PowerLawDensity(0.5, 0.0),
        es.LogDensity(1.0, 0.1),
        es.CustomDensity(lambda s: 1.0 + np.exp(-s), "exp"),
    ],
)
def test_gauss_law_round_trip(profile):
    r = np.linspace(0.5, 5.0, 46)
    rho = profile(r)
    assert np.max(np.abs(_density_from_field(es.field_from_density(profile), r) - rho) / np.abs(rho)) < 1e-6


def test_quadrature_route_matches_analytic_route():
    analytic = es.field_from_density(es.PowerLawDensity(1.7, 3.0))
    numeric = es.field_from_density(es.CustomDensity(lambda s: 1.7 * s**3))
    r = np.linspace(0.2, 4.0, 9)
    np.testing.assert_allclose(numeric(r), analytic(r), rtol=1e-12)
    np.testing.assert_allclose(numeric.derivative(r), analytic.derivative(r), rtol=1e-10)
    log_numeric = es.field_from_density(es.CustomDensity(lambda s: np.log(s / 0.5)))
    log_analytic = es.field_from_density(es.LogDensity(1.0, 0.5))
    np.testing.assert_allclose(log_numeric(r), log_analytic(r), rtol=1e-11)


def test_field_domain():
    field = es.field_from_density(es.PowerLawDensity(1.0, 1.0))
    with pytest.raises(DomainError):
        field(0.0)
    with pytest.raises(DomainError):
        es.enclosed_charge(es.PowerLawDensity(1.0, 1.0), -1.0)


def test_density_validation():
    with pytest.raises(InvalidParameterError):
        es.PowerLawDensity(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        es.PowerLawDensity(1.0, -1.0)
    with pytest.raises(InvalidParameterError):
        es.LogDensity(1.0, 0.0)


def test_coupling_reproduces_linear_preset():
    Q, mu = 1.0, 1.0
    coupled = es.quadrupole_coupling(QuadrupoleTensor.axial(Q), es.power_field(0.5 * mu, 2.0))
    preset = preset_potential("linear", [mu], Q)
    r = np.linspace(0.05, 10.0, 50)
    np.testing.assert_allclose(coupled(r), preset(r), rtol=1e-15)
    assert coupled(3.0) == pytest.approx(3.0)


def test_coupling_from_density_reproduces_linear_preset():
    Q, mu = 0.6, 1.9
    field = es.field_from_density(es.linear_case_density(mu))
    coupled = es.quadrupole_coupling(QuadrupoleTensor.axial(Q), field)
    r = np.linspace(0.05, 10.0, 50)
    np.testing.assert_allclose(coupled(r), preset_potential("linear", [mu], Q)(r), rtol=1e-14)


def test_zero_tensor_gives_no_potential():
    coupled = es.quadrupole_coupling(QuadrupoleTensor(0.0, 0.0, 0.0), es.power_field(0.5, 2.0))
    np.testing.assert_array_equal(coupled(np.linspace(0.1, 5, 5)), 0.0)


def test_cubic_field_coupling_is_twice_the_preset():
    coupled = es.quadrupole_coupling(QuadrupoleTensor(-1.0, -1.0, 2.0), es.power_field(0.5, 4.0))
    preset = preset_potential("cubic", [1.0], 1.0)
    for r in (0.3, 1.0, 2.0):
        assert coupled(r) == pytest.approx(2.0 * r**3, rel=1e-14)
        assert coupled(r) / preset(r) == pytest.approx(2.0, rel=1e-14)


def test_log_field_coupling_has_opposite_constant():
    Q, e0, r0 = 1.0, 1.0, 1.0
    coupled = es.quadrupole_coupling(QuadrupoleTensor.axial(Q), es.field_from_density(es.LogDensity(e0, r0)))
    preset = preset_potential("log", [e0, r0], Q)
    r = np.linspace(0.2, 5.0, 11)
    np.testing.assert_allclose(coupled(r), Q * e0 * (0.5 * np.log(r / r0) + 0.25), rtol=1e-14)
    np.testing.assert_allclose(coupled(r) - preset(r), 0.5 * Q * e0, rtol=1e-13)


def test_non_diagonal_tensor_is_refused():
    tensor = QuadrupoleTensor(-1.0, -1.0, 2.0, off_diagonal=(0.1, 0.0, 0.0))
    with pytest.raises(UnsupportedConfigurationError):
        es.quadrupole_coupling(tensor, es.power_field(0.5, 2.0))


def test_coupled_potential_supports_wkb():
    from quadwkb.core import PhysicalParams, WkbProblem
    from quadwkb.wkb import solve_level

    coupled = es.quadrupole_coupling(QuadrupoleTensor.axial(1.0), es.power_field(0.5, 2.0))
    problem = WkbProblem(PhysicalParams(), coupled)
    assert solve_level(problem, 1).energy == pytest.approx(
        solve_level(WkbProblem(PhysicalParams(), preset_potential("linear", [1.0])), 1).energy, rel=1e-10)
