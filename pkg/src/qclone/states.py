"""Input states: Bloch-sphere qubits, Gibbs states, and thermal dilution.

Temperatures enter only through the dimensionless inverse temperatures
``eta = omega0 * beta / 2`` (single qubit, H = omega0 * sigma_z / 2) and
``gamma = 2 * beta * J`` (antiferromagnetic XX pair).  Both accept
``math.inf`` for the zero-temperature limit; every Boltzmann weight is
written in logistic / tanh form so large finite values do not overflow.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit

from qclone.matcore import InvalidDimensionError


class DomainError(ValueError):
    """A parameter lies outside its physical range."""


def _nonneg(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError(f"{name} must be >= 0 (inf allowed), got {x}")
    return x


def check_epsilon(eps, allow_one: bool = False) -> np.ndarray:
    """Validate a dilution weight: ``0 <= eps < 1`` (``<= 1`` if allowed)."""
    eps = np.asarray(eps, dtype=float)
    upper_ok = eps <= 1.0 if allow_one else eps < 1.0
    if np.any(np.isnan(eps)) or np.any(eps < 0.0) or not np.all(upper_ok):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise DomainError(f"epsilon must lie in {bound}, got {eps}")
    return eps


def check_alpha(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if np.any(np.isnan(alpha)) or np.any(np.abs(alpha) > 1.0):
        raise DomainError(f"alpha must satisfy |alpha| <= 1, got {alpha}")
    return alpha


def pure_qubit(theta, phi) -> np.ndarray:
    """State vector ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(~(theta >= 0.0) | (theta > np.pi)):
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    if np.any(~(phi >= 0.0) | (phi >= 2 * np.pi)):
        raise DomainError(f"phi must lie in [0, 2pi), got {phi}")
    theta, phi = np.broadcast_arrays(theta, phi)
    return np.stack(
        [np.cos(theta / 2) + 0j, np.exp(1j * phi) * np.sin(theta / 2)], axis=-1
    )


def qubit_populations(eta) -> tuple[np.ndarray, np.ndarray]:
    """Thermal populations ``(p0, p1)`` of H = omega0 sigma_z / 2.

    ``p0 = exp(-eta)/Z`` and ``p1 = exp(eta)/Z`` with ``Z = 2 cosh(eta)``.
    """
    eta = _nonneg(eta, "eta")
    return expit(-2.0 * eta), expit(2.0 * eta)


def thermal_qubit(eta) -> np.ndarray:
    p0, p1 = qubit_populations(eta)
    rho = np.zeros(np.shape(p0) + (2, 2), dtype=complex)
    rho[..., 0, 0] = p0
    rho[..., 1, 1] = p1
    return rho


def xx_weights(gamma) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(1/Z, cosh(gamma)/Z, sinh(gamma)/Z)`` with ``Z = 2(1 + cosh gamma)``."""
    gamma = _nonneg(gamma, "gamma")
    with np.errstate(over="ignore"):
        x = np.exp(-gamma)
    inv_z = x / (1.0 + x) ** 2
    sech = 2.0 * x / (1.0 + x * x)
    cosh_z = 0.5 / (1.0 + sech)
    sinh_z = 0.5 * np.tanh(gamma / 2.0)
    return inv_z, cosh_z, sinh_z


def thermal_xx(gamma) -> np.ndarray:
    """Gibbs state of ``J (sx sx + sy sy)`` with J > 0 at ``gamma = 2 beta J``."""
    inv_z, cosh_z, sinh_z = xx_weights(gamma)
    rho = np.zeros(np.shape(inv_z) + (4, 4), dtype=complex)
    rho[..., 0, 0] = inv_z
    rho[..., 3, 3] = inv_z
    rho[..., 1, 1] = cosh_z
    rho[..., 2, 2] = cosh_z
    rho[..., 1, 2] = -sinh_z
    rho[..., 2, 1] = -sinh_z
    return rho


def alpha_singlet(alpha) -> np.ndarray:
    """``alpha|01> - sqrt(1 - alpha^2)|10>``."""
    alpha = check_alpha(alpha)
    psi = np.zeros(alpha.shape + (4,), dtype=complex)
    psi[..., 1] = alpha
    psi[..., 2] = -np.sqrt(1.0 - alpha * alpha)
    return psi


def dilute(pure, thermal, eps, allow_one: bool = False) -> np.ndarray:
    """Mix ``(1 - eps) * pure + eps * thermal``.

    ``allow_one`` admits ``eps == 1``, which is only meaningful as a limit
    probe.
    """
    pure = np.asarray(pure, dtype=complex)
    thermal = np.asarray(thermal, dtype=complex)
    if pure.shape[-2:] != thermal.shape[-2:]:
        raise InvalidDimensionError(
            f"cannot mix {pure.shape[-2:]} with {thermal.shape[-2:]}"
        )
    eps = check_epsilon(eps, allow_one)[..., None, None]
    return (1.0 - eps) * pure + eps * thermal
