"""Entanglement broadcasting of a thermally diluted two-qubit state.

Three schemes copy the pair ``alpha|01> - sqrt(1-alpha^2)|10>`` mixed with
the XX Gibbs state:

* ``local-uc``: two optimal universal cloners, one per qubit; the output is
  one of the nonlocal copy pairs (a'b and its equivalents).
* ``global-uc``: the 4-level universal cloner applied to the pair as a whole.
* ``ent-cloner``: the optimal entanglement cloner.

All three outputs share one X-shaped matrix, fixed by the constants M and L.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from qclone import states
from qclone.matcore import partial_trace, projector, tensor

DISCRIMINANT_CLAMP = 1e-12
COMPACT_FORM_TOL = 1e-10


class Scenario(str, enum.Enum):
    LOCAL_UC = "local-uc"
    GLOBAL_UC = "global-uc"
    ENT_CLONER = "ent-cloner"


@dataclass(frozen=True)
class ScenarioConstants:
    M: float
    L: float
    A: float | None = None
    C: float | None = None


def l_from_m(M: float) -> float:
    """``L = 3 (1 + 2M + sqrt(1 + 4M - 9M^2)) / 26``.

    The radicand vanishes analytically for the entanglement cloner.  Rounding
    leaves it at about +-1e-16 there, and the square root would blow that up
    to ~1e-8, so any radicand within ``DISCRIMINANT_CLAMP`` of zero is zeroed.
    """
    disc = 1.0 + 4.0 * M - 9.0 * M * M
    if abs(disc) <= DISCRIMINANT_CLAMP:
        disc = 0.0
    elif disc < 0.0:
        raise states.DomainError(f"L undefined for M={M}: discriminant {disc:.3e}")
    return 3.0 * (1.0 + 2.0 * M + math.sqrt(disc)) / 26.0


def scenario_constants(s: Scenario | str) -> ScenarioConstants:
    s = Scenario(s)
    if s is Scenario.LOCAL_UC:
        M = (2.0 / 3.0) ** 2
        return ScenarioConstants(M=M, L=l_from_m(M))
    if s is Scenario.GLOBAL_UC:
        M = 3.0 / 5.0
        return ScenarioConstants(M=M, L=l_from_m(M))
    A = math.sqrt(0.5 + 1.0 / math.sqrt(13.0)) / 3.0
    C = A * (math.sqrt(13.0) - 3.0) / 2.0
    M = 6.0 * A * A + 4.0 * A * C
    return ScenarioConstants(M=M, L=l_from_m(M), A=A, C=C)


def x_state(alpha, eps, gamma, M: float, L: float) -> np.ndarray:
    """Broadcast output for arbitrary constants ``(M, L)``; broadcasts over inputs."""
    alpha = states.check_alpha(alpha)
    eps = states.check_epsilon(eps, allow_one=True)
    inv_z, cosh_z, sinh_z = states.xx_weights(gamma)
    alpha, eps, inv_z, cosh_z, sinh_z = np.broadcast_arrays(alpha, eps, inv_z, cosh_z, sinh_z)
    delta = alpha * np.sqrt(1.0 - alpha * alpha)

    corner = M * eps * inv_z + (1.0 - M) / 4.0
    middle = M * ((1.0 - eps) / 2.0 + eps * cosh_z) + (1.0 - M) / 4.0
    tilt = L * (1.0 - eps) * (2.0 * alpha * alpha - 1.0)
    coherence = -M * ((1.0 - eps) * delta + eps * sinh_z)

    rho = np.zeros(alpha.shape + (4, 4), dtype=complex)
    rho[..., 0, 0] = corner
    rho[..., 3, 3] = corner
    rho[..., 1, 1] = middle + tilt
    rho[..., 2, 2] = middle - tilt
    rho[..., 1, 2] = coherence
    rho[..., 2, 1] = coherence
    return rho


def broadcast_output(alpha, eps, gamma, s: Scenario | str) -> np.ndarray:
    """Two-qubit clone state produced by scheme ``s``."""
    k = scenario_constants(s)
    return x_state(alpha, eps, gamma, k.M, k.L)


def diluted_input(alpha, eps, gamma) -> np.ndarray:
    """The pair to be broadcast: ``|Psi_alpha>`` diluted by the XX Gibbs state."""
    return states.dilute(
        projector(states.alpha_singlet(alpha)), states.thermal_xx(gamma), eps, allow_one=True
    )


def local_uc_oracle(rho_in, shrink: float = 2.0 / 3.0) -> np.ndarray:
    """Nonlocal copy pair after independent universal cloning of each qubit.

    Each local cloner acts on its clone as a depolarizing map of strength
    ``shrink``, so the pair sees the product of two such maps.
    """
    rho_in = np.asarray(rho_in, dtype=complex)
    half = np.broadcast_to(np.eye(2, dtype=complex) / 2, rho_in.shape[:-2] + (2, 2))
    rho_a = partial_trace(rho_in, "A")
    rho_b = partial_trace(rho_in, "B")
    return (
        shrink**2 * rho_in
        + shrink * (1.0 - shrink) * (tensor(rho_a, half) + tensor(half, rho_b))
        + (1.0 - shrink) ** 2 * np.eye(4) / 4
    )


def global_depolarize_oracle(rho_in, M: float) -> np.ndarray:
    if not 0.0 <= M <= 1.0:
        raise states.DomainError(f"M must lie in [0, 1], got {M}")
    return M * np.asarray(rho_in, dtype=complex) + (1.0 - M) * np.eye(4) / 4


def compact_form_check(alpha, eps, gamma, s: Scenario | str) -> tuple[bool, float]:
    """Does the output equal ``M rho_in + (1 - M) I/4`` for this point?

    Returns ``(holds, max_residual)``; holds iff the largest entrywise
    difference is at most ``COMPACT_FORM_TOL``.
    """
    k = scenario_constants(s)
    out = broadcast_output(alpha, eps, gamma, s)
    ref = global_depolarize_oracle(diluted_input(alpha, eps, gamma), k.M)
    residual = float(np.max(np.abs(out - ref)))
    return residual <= COMPACT_FORM_TOL, residual
