"""Symmetric 1 -> 2 qubit cloners acting on thermally diluted inputs.

Each clone of a symmetric universal (UC) or phase-covariant (PCC) machine
is obtained from the input by the shrink map

    rho00 -> mu^2 rho00 + nu^2,     rho01 -> 2 mu nu rho01,

with ``mu^2 + 2 nu^2 = 1``.  The fidelity with the undisturbed pure input
has a closed form; :func:`fidelity_numeric` rebuilds the same number from
explicit density matrices and serves as its independent check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from qclone import states
from qclone.matcore import fidelity_pure, projector

CLASSICAL_FIDELITY = 0.5


class Machine(str, enum.Enum):
    UC = "uc"
    PCC = "pcc"


@dataclass(frozen=True)
class ShrinkParams:
    mu: np.ndarray | float
    nu: np.ndarray | float

    @property
    def contraction(self):
        """Scale factor ``2 mu nu`` of the off-diagonal element."""
        return 2.0 * self.mu * self.nu


def shrink_params(machine: Machine | str, theta=None) -> ShrinkParams:
    """Shrink coefficients for the UC, or for the PCC tuned to orbit ``theta``.

    The PCC uses ``nu^2 = (1 - cos^2 t / sqrt(cos^4 t + 2 sin^4 t)) / 4``,
    which equals the ``tan^4`` form but stays finite at ``t = pi/2``.
    """
    machine = Machine(machine)
    if machine is Machine.UC:
        nu2 = np.asarray(1.0 / 6.0)
        if theta is not None:
            nu2 = np.broadcast_to(nu2, np.shape(theta))
    else:
        if theta is None:
            raise ValueError("the phase-covariant cloner needs its orbit theta")
        t = np.asarray(theta, dtype=float)
        c2 = np.cos(t) ** 2
        s2 = np.sin(t) ** 2
        nu2 = (1.0 - c2 / np.sqrt(c2 * c2 + 2.0 * s2 * s2)) / 4.0
        nu2 = np.clip(nu2, 0.0, None)
    mu2 = 1.0 - 2.0 * nu2
    return ShrinkParams(mu=np.sqrt(mu2)[()], nu=np.sqrt(nu2)[()])


def clone_single(rho_in, p: ShrinkParams) -> np.ndarray:
    """Apply the one-clone shrink map to a (stack of) qubit density matrices."""
    rho_in = np.asarray(rho_in, dtype=complex)
    mu = np.asarray(p.mu)[..., None, None]
    nu = np.asarray(p.nu)[..., None, None]
    r00 = mu**2 * rho_in[..., 0:1, 0:1] + nu**2
    r01 = 2.0 * mu * nu * rho_in[..., 0:1, 1:2]
    out = np.concatenate(
        [
            np.concatenate([r00, r01], axis=-1),
            np.concatenate([np.conj(r01), 1.0 - r00], axis=-1),
        ],
        axis=-2,
    )
    return out


def fidelity_closed_form(machine: Machine | str, theta, eps, eta, orbit=None):
    """Closed-form fidelity between one clone and the undiluted input.

    ``orbit`` is the PCC design orbit; it defaults to the input's ``theta``.
    """
    theta = np.asarray(theta, dtype=float)
    eps = states.check_epsilon(eps, allow_one=True)
    p0, p1 = states.qubit_populations(eta)
    p = shrink_params(machine, theta if orbit is None else orbit)
    mu, nu = p.mu, p.nu
    thermal_overlap = p0 * np.cos(theta / 2) ** 2 + p1 * np.sin(theta / 2) ** 2
    return (
        mu**2 * (1.0 - eps + eps * thermal_overlap)
        + (mu * nu - mu**2 / 2.0) * (1.0 - eps) * np.sin(theta) ** 2
        + nu**2
    )


def cloned_state(machine: Machine | str, theta, phi, eps, eta, orbit=None) -> np.ndarray:
    """Clone density matrix for the diluted input ``(theta, phi, eps, eta)``."""
    psi = states.pure_qubit(theta, phi)
    rho_in = states.dilute(projector(psi), states.thermal_qubit(eta), eps, allow_one=True)
    p = shrink_params(machine, theta if orbit is None else orbit)
    return clone_single(rho_in, p)


def fidelity_numeric(machine: Machine | str, theta, phi, eps, eta, orbit=None):
    """Fidelity by explicit matrices: dilute, clone, then overlap with the pure input."""
    psi = states.pure_qubit(theta, phi)
    out = cloned_state(machine, theta, phi, eps, eta, orbit)
    return fidelity_pure(psi, out)


def classical_threshold(theta, eta):
    """Largest dilution for which the UC clone still beats fidelity 1/2.

    Returns ``cosh(eta) / (exp(-eta) sin^2(theta/2) + exp(eta) cos^2(theta/2))``;
    values above 1 mean every admissible dilution beats the classical cloner.
    """
    theta = np.asarray(theta, dtype=float)
    p0, p1 = states.qubit_populations(eta)
    denom = 2.0 * (p1 * np.cos(theta / 2) ** 2 + p0 * np.sin(theta / 2) ** 2)
    with np.errstate(divide="ignore"):
        return (1.0 / denom)[()]


def beats_classical(f):
    return np.asarray(f) > CLASSICAL_FIDELITY
