"""Functionals and the Jacobian symplecticity probe."""

import numpy as np
import pytest
from scipy.integrate import quad

from snls.diagnostics import (
    canonical_form,
    energy_h0,
    mass,
    sobolev_norm,
    symplectic_defect,
)
from snls.torus import SpectralField, free_propagator, make_grid


def random_field(K, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    grid = make_grid(K)
    c = scale * (rng.standard_normal(2 * K + 1) + 1j * rng.standard_normal(2 * K + 1))
    return SpectralField(c, grid)


def test_mass_single_mode():
    grid = make_grid(2)
    c = np.zeros(5, dtype=complex)
    c[3] = 3.0 - 4.0j
    assert mass(SpectralField(c, grid)) == pytest.approx(25.0)


def test_sobolev_norm_values():
    grid = make_grid(2)
    c = np.zeros(5, dtype=complex)
    c[4] = 1.0  # k = 2
    f = SpectralField(c, grid)
    assert sobolev_norm(f, 0.0) == pytest.approx(1.0)
    assert sobolev_norm(f, 2.0) == pytest.approx(5.0)  # (1+4)^2 = 25, sqrt = 5
    with pytest.raises(ValueError):
        sobolev_norm(f, -1.0)


def test_energy_h0_against_physical_quadrature():
    # [DERIVED] for a field supported on |k| <= K/3 the truncated quartic
    # is the full quartic, so H0 = (1/2pi) int (|u_x|^2/2 + lam |u|^4/4)
    K = 9
    grid = make_grid(K)
    rng = np.random.default_rng(4)
    c = np.zeros(2 * K + 1, dtype=complex)
    for k in (-3, -1, 0, 2, 3):
        c[k + K] = rng.standard_normal() + 1j * rng.standard_normal()
    f = SpectralField(c, grid)
    lam = 0.7

    ks = np.arange(-K, K + 1)

    def u(x):
        return np.sum(c * np.exp(1j * ks * x))

    def ux(x):
        return np.sum(1j * ks * c * np.exp(1j * ks * x))

    integrand = lambda x: 0.5 * np.abs(ux(x)) ** 2 + 0.25 * lam * np.abs(u(x)) ** 4
    val, _ = quad(integrand, 0.0, 2 * np.pi, limit=200, epsabs=1e-12)
    np.testing.assert_allclose(energy_h0(f, lam), val / (2 * np.pi), rtol=1e-9)


def test_energy_h0_lambda_zero_is_kinetic():
    f = random_field(4, 1)
    k = f.grid.modes().astype(float)
    expected = 0.5 * np.sum(k**2 * np.abs(f.coefficients) ** 2)
    assert energy_h0(f, 0.0) == pytest.approx(expected)


def test_canonical_form_structure():
    J = canonical_form(3)
    assert J.shape == (6, 6)
    np.testing.assert_array_equal(J.T, -J)
    np.testing.assert_array_equal(J @ J, -np.eye(6))


def test_symplectic_defect_identity_map():
    f = random_field(3, 0)
    # central differences carry ~eps*|x|/h rounding, so not exactly 0
    assert symplectic_defect(lambda u: u, f) < 1e-10


def test_symplectic_defect_free_flow():
    # the exact linear flow is symplectic; central differences are exact
    # for linear maps up to rounding
    f = random_field(3, 1)
    assert symplectic_defect(lambda u: free_propagator(u, 0.3), f) < 1e-10


def test_symplectic_defect_detects_dissipation():
    # u -> 0.9 u scales the form by 0.81: defect 0.19
    f = random_field(2, 2)
    d = symplectic_defect(lambda u: 0.9 * u, f)
    assert d == pytest.approx(1.0 - 0.81, abs=1e-8)


def test_symplectic_defect_rejects_bad_h():
    f = random_field(2, 2)
    with pytest.raises(ValueError):
        symplectic_defect(lambda u: u, f, h=0.0)
