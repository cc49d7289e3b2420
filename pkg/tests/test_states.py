import math

import numpy as np
import pytest

from qclone.matcore import check_density, partial_trace, projector
from qclone.states import (
    DomainError,
    alpha_singlet,
    dilute,
    pure_qubit,
    thermal_qubit,
    thermal_xx,
)

SINGLET = projector(np.array([0, 1, -1, 0]) / math.sqrt(2))


def xx_direct(g):
    """Gibbs weights straight from cosh/sinh, valid for moderate gamma."""
    z = 2 * (1 + math.cosh(g))
    return 1 / z, math.cosh(g) / z, math.sinh(g) / z


def test_pure_qubit_examples():
    np.testing.assert_allclose(pure_qubit(0, 0), [1, 0])
    np.testing.assert_allclose(pure_qubit(math.pi, 0), [0, 1], atol=1e-16)
    np.testing.assert_allclose(pure_qubit(math.pi / 2, math.pi / 2), [1 / math.sqrt(2), 1j / math.sqrt(2)])


@pytest.mark.parametrize("theta,phi", [(-0.1, 0), (3.2, 0), (1, 2 * math.pi), (1, -1e-3), (math.nan, 0)])
def test_pure_qubit_domain(theta, phi):
    with pytest.raises(DomainError):
        pure_qubit(theta, phi)


def test_thermal_qubit_examples():
    np.testing.assert_allclose(thermal_qubit(0), np.eye(2) / 2)
    np.testing.assert_array_equal(thermal_qubit(math.inf), np.diag([0, 1]))
    p0 = 1 / (1 + math.e**2)
    np.testing.assert_allclose(np.diag(thermal_qubit(1)).real, [p0, 1 - p0], rtol=1e-15)
    assert p0 == pytest.approx(0.11920292202211757)


def test_thermal_qubit_matches_boltzmann():
    for eta in [0.1, 0.7, 3.0, 20.0]:
        z = 2 * math.cosh(eta)
        np.testing.assert_allclose(
            np.diag(thermal_qubit(eta)).real, [math.exp(-eta) / z, math.exp(eta) / z], rtol=1e-14
        )


def test_thermal_large_eta_no_overflow():
    rho = thermal_qubit(1e3)
    assert np.all(np.isfinite(rho))
    np.testing.assert_array_equal(rho, thermal_qubit(math.inf))


def test_thermal_xx_examples():
    np.testing.assert_allclose(thermal_xx(0), np.eye(4) / 4, atol=1e-16)
    np.testing.assert_allclose(thermal_xx(math.inf), SINGLET, atol=1e-16)
    rho = thermal_xx(1.0)
    inv_z, c, s = xx_direct(1.0)
    assert rho[1, 1].real == pytest.approx(c, rel=1e-14)
    assert rho[1, 2].real == pytest.approx(-s, rel=1e-14)
    assert rho[0, 0].real == pytest.approx(inv_z, rel=1e-14)
    assert c == pytest.approx(0.303388066758518)
    assert s == pytest.approx(0.231058578630005)


def test_thermal_xx_is_gibbs_state_of_xx_hamiltonian():
    sx = np.array([[0, 1], [1, 0]])
    sy = np.array([[0, -1j], [1j, 0]])
    h = np.kron(sx, sx) + np.kron(sy, sy)
    for g in [0.3, 1.0, 4.0]:
        w, v = np.linalg.eigh(h)
        # beta*J = g/2; H eigenvalues in units of J
        boltz = v @ np.diag(np.exp(-g / 2 * w)) @ v.conj().T
        np.testing.assert_allclose(thermal_xx(g), boltz / np.trace(boltz), atol=1e-14)


def test_thermal_xx_large_gamma_no_overflow():
    np.testing.assert_allclose(thermal_xx(1e3), SINGLET, atol=1e-16)


@pytest.mark.parametrize("fn", [thermal_qubit, thermal_xx])
def test_thermal_negative_rejected(fn):
    with pytest.raises(DomainError):
        fn(-0.5)


def test_thermal_states_are_valid_and_monotone():
    grid = np.linspace(0, 30, 301)
    check_density(thermal_qubit(grid))
    check_density(thermal_xx(grid))
    assert np.all(np.diff(thermal_qubit(grid)[:, 1, 1].real) >= 0)
    assert np.all(np.diff(thermal_qubit(grid[:100])[:, 1, 1].real) > 0)
    # XX ground state is the singlet: population <psi-|rho|psi->
    ground = np.einsum("i,nij,j->n", [0, 1, -1, 0], thermal_xx(grid), [0, 1, -1, 0]).real / 2
    assert np.all(np.diff(ground) >= 0)
    assert np.all(np.diff(ground[:100]) > 0)


def test_thermal_xx_marginals():
    g = np.concatenate([np.linspace(0, 50, 500), [math.inf]])
    rho = thermal_xx(g)
    for keep in "AB":
        assert np.max(np.abs(partial_trace(rho, keep) - np.eye(2) / 2)) <= 1e-12


def test_alpha_singlet_examples():
    np.testing.assert_allclose(alpha_singlet(1 / math.sqrt(2)), [0, 1 / math.sqrt(2), -1 / math.sqrt(2), 0])
    np.testing.assert_array_equal(alpha_singlet(1.0), [0, 1, 0, 0])
    np.testing.assert_allclose(alpha_singlet(-0.6), [0, -0.6, -0.8, 0])
    with pytest.raises(DomainError):
        alpha_singlet(1.01)


def test_dilute_examples():
    pure = np.diag([1.0, 0.0])
    np.testing.assert_array_equal(dilute(pure, np.eye(2) / 2, 0.0), pure)
    np.testing.assert_array_equal(dilute(pure, np.eye(2) / 2, 1.0, allow_one=True), np.eye(2) / 2)
    # (1 - 2/3) * |0><0| + (2/3) * I/2
    np.testing.assert_allclose(np.diag(dilute(pure, np.eye(2) / 2, 2 / 3)).real, [2 / 3, 1 / 3])


def test_dilute_affine_and_domain():
    rng = np.random.default_rng(0)
    a = projector(alpha_singlet(rng.uniform(-1, 1, 50)))
    t = thermal_xx(rng.uniform(0, 5, 50))
    e = rng.uniform(0, 1, 50)
    expected = (1 - e)[:, None, None] * a + e[:, None, None] * t
    assert np.max(np.abs(dilute(a, t, e) - expected)) <= 1e-15
    check_density(dilute(a, t, e))
    with pytest.raises(DomainError):
        dilute(a, t, 1.0)
    with pytest.raises(ValueError):
        dilute(np.eye(2) / 2, np.eye(4) / 4, 0.1)
