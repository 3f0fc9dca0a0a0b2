import math

import mpmath
import numpy as np
import pytest
import scipy.linalg
import scipy.special

from quadwkb.core import Linear, Logarithmic, PhysicalParams, PowerLaw, WkbProblem
from quadwkb.errors import DomainTooSmallError, InvalidParameterError
from quadwkb.oracle import (
    AIRY_ZEROS,
    OracleConfig,
    airy_reference_linear,
    eigenvector,
    exact_spectrum,
    lowest_eigenvalues,
    richardson,
    tridiagonal,
)
from quadwkb.wkb import solve_level

UNIT = PhysicalParams()
LINEAR = WkbProblem(UNIT, Linear(1.0))
AIRY_E1 = 1.85575708148923848


@pytest.fixture(scope="module")
def linear_spectrum():
    return exact_spectrum(LINEAR, OracleConfig(levels=10))


def test_airy_table_matches_scipy_and_mpmath():
    a, *_ = scipy.special.ai_zeros(len(AIRY_ZEROS))
    np.testing.assert_allclose(AIRY_ZEROS, -a, rtol=1e-11)  # scipy is good to ~1e-12 here
    for k, z in enumerate(AIRY_ZEROS, 1):
        assert z == pytest.approx(-float(mpmath.airyaizero(k)), rel=1e-15)


def test_airy_reference_value():
    assert airy_reference_linear(1, UNIT, 1.0) == pytest.approx(AIRY_E1, rel=1e-15)
    assert airy_reference_linear(1, UNIT, 1.0) == pytest.approx(2 ** (-1 / 3) * AIRY_ZEROS[0], rel=1e-15)
    with pytest.raises(InvalidParameterError):
        airy_reference_linear(11, UNIT, 1.0)


def test_oracle_matches_airy(linear_spectrum):
    ref = [airy_reference_linear(n, UNIT, 1.0) for n in range(1, 11)]
    np.testing.assert_allclose(linear_spectrum.eigenvalues, ref, rtol=1e-6)
    assert linear_spectrum.eigenvalues[0] == pytest.approx(1.8557571, abs=5e-8)


def test_node_counts(linear_spectrum):
    assert linear_spectrum.node_counts == list(range(10))


def test_harmonic_oscillator_levels():
    # V = r^2 / 2 with Dirichlet u(0) = 0: odd 1D oscillator states
    spec = exact_spectrum(WkbProblem(UNIT, PowerLaw(0.5, 2.0)), OracleConfig(levels=4))
    np.testing.assert_allclose(spec.eigenvalues, [1.5, 3.5, 5.5, 7.5], rtol=1e-8)


def test_richardson_ratio_is_second_order():
    spec = exact_spectrum(LINEAR, OracleConfig(levels=3, grid_points=500, refinement_levels=3))
    exact = np.array([airy_reference_linear(n, UNIT, 1.0) for n in range(1, 4)])
    err = spec.raw - exact
    ratios = err[:-1] / err[1:]
    assert np.all((ratios > 3.5) & (ratios < 4.5))


def test_richardson_on_synthetic_table():
    h = np.array([1.0, 0.5, 0.25])
    table = (2.0 + 0.3 * h**2 + 0.07 * h**4)[:, None]
    best, est = richardson(table)
    assert best[0] == pytest.approx(2.0, abs=1e-14)
    assert est[0] < 1e-2


def test_domain_independence():
    a = exact_spectrum(LINEAR, OracleConfig(levels=5, r_max_factor=2.0))
    b = exact_spectrum(LINEAR, OracleConfig(levels=5, r_max_factor=3.0))
    np.testing.assert_allclose(a.eigenvalues, b.eigenvalues, rtol=1e-7)


def test_sturm_bisection_matches_lapack():
    diag, off, _ = tridiagonal(WkbProblem(UNIT, Linear(1.0), l=2), 12.0, 600, langer=True)
    ours = lowest_eigenvalues(diag, off, 8)
    ref = scipy.linalg.eigh_tridiagonal(diag, np.full(diag.size - 1, off), eigvals_only=True,
                                        select="i", select_range=(0, 7))
    np.testing.assert_allclose(ours, ref, rtol=1e-12, atol=1e-12)


def test_eigenvector_solves_the_matrix():
    diag, off, _ = tridiagonal(LINEAR, 10.0, 400, langer=True)
    value = lowest_eigenvalues(diag, off, 3)[2]
    v = eigenvector(diag, off, value)
    tv = diag * v
    tv[:-1] += off * v[1:]
    tv[1:] += off * v[:-1]
    assert np.linalg.norm(tv - value * v) < 1e-8


def test_explicit_small_domain_is_refused():
    with pytest.raises(DomainTooSmallError):
        exact_spectrum(LINEAR, OracleConfig(levels=3, r_max=4.0))


def test_log_well_oracle():
    spec = exact_spectrum(WkbProblem(UNIT, Logarithmic(1.0, 1.0)), OracleConfig(levels=3))
    np.testing.assert_allclose(spec.eigenvalues, [0.27216612, 0.67372128, 0.89480785], atol=2e-8)
    assert spec.node_counts == [0, 1, 2]


def test_wkb_error_shrinks_with_n(linear_spectrum):
    errs = [abs(solve_level(LINEAR.with_(maslov=0.25), n).energy / e - 1.0)
            for n, e in enumerate(linear_spectrum.eigenvalues, 1)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[4] < 1e-3


def test_half_maslov_error_follows_prediction(linear_spectrum):
    for n in range(5, 11):
        e = linear_spectrum.eigenvalues[n - 1]
        err = abs(solve_level(LINEAR, n).energy - e) / e
        predicted = abs(((n - 0.5) / (n - 0.25)) ** (2 / 3) - 1.0)
        assert abs(err - predicted) / predicted < 0.1


def test_oracle_scales_like_wkb():
    one = exact_spectrum(LINEAR, OracleConfig(levels=3)).eigenvalues
    eight = exact_spectrum(WkbProblem(UNIT, Linear(8.0)), OracleConfig(levels=3)).eigenvalues
    np.testing.assert_allclose(eight / one, 4.0, rtol=1e-7)


def test_langer_override_in_config():
    off = exact_spectrum(LINEAR, OracleConfig(levels=2, langer_modified=False))
    on = exact_spectrum(LINEAR, OracleConfig(levels=2))
    assert np.all(off.eigenvalues < on.eigenvalues)


@pytest.mark.parametrize("kwargs", [dict(grid_points=10), dict(r_max_factor=1.0), dict(levels=0),
                                    dict(refinement_levels=0), dict(r_max=-1.0)])
def test_config_validation(kwargs):
    with pytest.raises(InvalidParameterError):
        OracleConfig(**kwargs)


def test_two_dimensional_units():
    spec = exact_spectrum(WkbProblem(PhysicalParams(hbar=2.0, mass=0.5), Linear(1.0)), OracleConfig(levels=2))
    ref = [airy_reference_linear(n, PhysicalParams(hbar=2.0, mass=0.5), 1.0) for n in (1, 2)]
    np.testing.assert_allclose(spec.eigenvalues, ref, rtol=1e-6)
    assert math.isclose(ref[0], AIRY_E1 * 8 ** (1 / 3), rel_tol=1e-14)
