"""Small dense complex linear algebra for one- and two-qubit operators.

Every function accepts a single matrix or a stack of matrices with shape
``(..., d, d)`` and broadcasts over the leading axes.  Two-qubit matrices use
the basis order ``|00>, |01>, |10>, |11>`` with the first label belonging to
subsystem A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-12
    trace: float = 1e-12
    psd_floor: float = -1e-10
    eig_residual: float = 1e-11
    # Jacobi stops once the off-diagonal Frobenius norm drops below
    # jacobi_offdiag * max(1, ||m||_F).
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    # Eigenvalues below sqrt_noise * max|w| are indistinguishable from zero
    # and are zeroed before any square root.
    sqrt_noise: float = 16 * np.finfo(float).eps


TOL = Tolerances()


class InvalidDimensionError(ValueError):
    pass


class NotDensityMatrixError(ValueError):
    pass


class NotPSDError(NotDensityMatrixError):
    pass


class NumericalFailureError(ArithmeticError):
    pass


def _as_square(m, dims=(2, 4)) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2] or m.shape[-1] not in dims:
        raise InvalidDimensionError(
            f"expected square matrix of dimension {dims}, got shape {m.shape}"
        )
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def check_density(rho, dims=(2, 4)) -> np.ndarray:
    """Validate a (stack of) density matrices and return it as a complex array.

    Raises:
        NotDensityMatrixError: if the matrix is not Hermitian or does not have
            unit trace.
        NotPSDError: if an eigenvalue lies below ``TOL.psd_floor``.
    """
    rho = _as_square(rho, dims)
    if not np.all(np.isfinite(rho)):
        raise NotDensityMatrixError("density matrix has non-finite entries")
    herm = np.max(np.abs(rho - dagger(rho)), initial=0.0)
    if herm > TOL.hermiticity:
        raise NotDensityMatrixError(f"not Hermitian: max |m - m^dagger| = {herm:.3e}")
    tr = np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0), initial=0.0)
    if tr > TOL.trace:
        raise NotDensityMatrixError(f"trace differs from 1 by {tr:.3e}")
    lam = np.min(hermitian_eig(rho)[0], initial=np.inf)
    if lam < TOL.psd_floor:
        raise NotPSDError(f"not positive semidefinite: min eigenvalue {lam:.3e}")
    return rho


def check_state_vector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape[-1] not in (2, 4):
        raise InvalidDimensionError(f"state vector must have 2 or 4 amplitudes, got {psi.shape}")
    norm = np.linalg.norm(psi, axis=-1)
    if np.max(np.abs(norm - 1.0), initial=0.0) > 1e-12:
        raise ValueError("state vector is not normalized")
    return psi


def projector(psi) -> np.ndarray:
    """|psi><psi| for a (stack of) state vectors."""
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :, None] * np.conj(psi[..., None, :])


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 matrices; ``a`` carries the slow index."""
    a = _as_square(a, (2,))
    b = _as_square(b, (2,))
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    return out.reshape(out.shape[:-4] + (4, 4))


def _split(rho) -> np.ndarray:
    rho = _as_square(rho, (4,))
    return rho.reshape(rho.shape[:-2] + (2, 2, 2, 2))


def partial_trace(rho, keep: str = "A") -> np.ndarray:
    """Reduce a two-qubit operator to subsystem ``keep`` ("A" or "B")."""
    r = _split(rho)
    if keep == "A":
        return np.einsum("...ijkj->...ik", r)
    if keep == "B":
        return np.einsum("...ijil->...jl", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_transpose(rho, on: str = "A") -> np.ndarray:
    """Transpose subsystem ``on`` of a two-qubit operator.

    The result is Hermitian with the same trace but need not be positive.
    """
    r = _split(rho)
    if on == "A":
        r = np.swapaxes(r, -4, -2)
    elif on == "B":
        r = np.swapaxes(r, -3, -1)
    else:
        raise ValueError(f"on must be 'A' or 'B', got {on!r}")
    return r.reshape(r.shape[:-4] + (4, 4))


def _rotate(a, v, p, q, active, scale):
    """One complex Jacobi rotation zeroing a[..., p, q] where ``active``."""
    apq = a[:, p, q]
    r = np.abs(apq)
    # pivots this small cannot affect convergence and would overflow tau
    rot = active & (r > 1e-20 * scale)
    if not np.any(rot):
        return
    idx = np.nonzero(rot)[0]
    app = a[idx, p, p].real
    aqq = a[idx, q, q].real
    apq = apq[idx]
    r = r[idx]
    phase = np.conj(apq) / r
    tau = (aqq - app) / (2.0 * r)
    t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    # U restricted to (p, q) is [[c, s], [-s*phase, c*phase]].
    upp, upq, uqp, uqq = c, s, -s * phase, c * phase

    sub = a[idx]
    colp = sub[:, :, p].copy()
    colq = sub[:, :, q]
    sub[:, :, p] = colp * upp[:, None] + colq * uqp[:, None]
    sub[:, :, q] = colp * upq[:, None] + colq * uqq[:, None]
    rowp = sub[:, p, :].copy()
    rowq = sub[:, q, :]
    sub[:, p, :] = rowp * np.conj(upp)[:, None] + rowq * np.conj(uqp)[:, None]
    sub[:, q, :] = rowp * np.conj(upq)[:, None] + rowq * np.conj(uqq)[:, None]
    sub[:, p, q] = 0.0
    sub[:, q, p] = 0.0
    sub[:, p, p] = sub[:, p, p].real
    sub[:, q, q] = sub[:, q, q].real
    a[idx] = sub

    vs = v[idx]
    colp = vs[:, :, p].copy()
    colq = vs[:, :, q]
    vs[:, :, p] = colp * upp[:, None] + colq * uqp[:, None]
    vs[:, :, q] = colp * upq[:, None] + colq * uqq[:, None]
    v[idx] = vs


def _offdiag_norm(a) -> np.ndarray:
    d = a.shape[-1]
    mask = ~np.eye(d, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=-1))


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose Hermitian 2x2 or 4x4 matrices by Jacobi rotations.

    A 2x2 matrix is diagonalized exactly by a single rotation; 4x4 matrices
    use cyclic sweeps over the six pivots.  Each matrix in a stack follows
    its own rotation sequence, so results do not depend on what else is in
    the stack.

    Returns:
        ``(w, v)`` with eigenvalues ``w`` in ascending order and orthonormal
        eigenvectors in the columns of ``v``.
    """
    m = _as_square(m)
    shape = m.shape
    d = shape[-1]
    a = 0.5 * (m + dagger(m))
    a = a.reshape((-1, d, d)).copy()
    n = a.shape[0]
    v = np.broadcast_to(np.eye(d, dtype=complex), (n, d, d)).copy()
    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1))))
    pivots = [(p, q) for p in range(d - 1) for q in range(p + 1, d)]

    for _ in range(TOL.jacobi_max_sweeps):
        active = _offdiag_norm(a) > TOL.jacobi_offdiag * scale
        if not np.any(active):
            break
        for p, q in pivots:
            _rotate(a, v, p, q, active, scale)
    else:
        if np.any(_offdiag_norm(a) > TOL.jacobi_offdiag * scale):
            raise NumericalFailureError("Jacobi eigensolver did not converge")

    w = np.real(np.einsum("...ii->...i", a))
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return w.reshape(shape[:-1]), v.reshape(shape)


def eigvalsh(m) -> np.ndarray:
    return hermitian_eig(m)[0]


def min_eigenvalue(m) -> np.ndarray:
    return hermitian_eig(m)[0][..., 0]


def _zero_noise(w) -> np.ndarray:
    floor = TOL.sqrt_noise * np.max(np.abs(w), axis=-1, keepdims=True)
    return np.where(w < floor, 0.0, w)


def psd_sqrt(rho) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix.

    Eigenvalues in ``[TOL.psd_floor, 0)`` and positive ones at rounding-noise
    level are set to zero; anything below the floor raises
    :class:`NotPSDError`.
    """
    w, v = hermitian_eig(rho)
    if np.min(w, initial=np.inf) < TOL.psd_floor:
        raise NotPSDError(f"matrix has eigenvalue {np.min(w):.3e} below PSD floor")
    root = np.sqrt(_zero_noise(w))
    return (v * root[..., None, :]) @ dagger(v)


def fidelity(rho, sigma) -> np.ndarray:
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``."""
    rho = _as_square(rho)
    sigma = _as_square(sigma)
    if rho.shape[-1] != sigma.shape[-1]:
        raise InvalidDimensionError("fidelity needs matrices of equal dimension")
    sr = psd_sqrt(rho)
    inner = sr @ sigma @ sr
    lam = _zero_noise(eigvalsh(inner))
    f = np.sum(np.sqrt(lam), axis=-1) ** 2
    return np.clip(f, 0.0, 1.0)


def fidelity_pure(psi, rho) -> np.ndarray:
    """Fidelity of a pure state with a density matrix, ``<psi|rho|psi>``."""
    psi = np.asarray(psi, dtype=complex)
    rho = _as_square(rho)
    if psi.shape[-1] != rho.shape[-1]:
        raise InvalidDimensionError("state vector and density matrix dimensions differ")
    return np.real(np.einsum("...i,...ij,...j->...", np.conj(psi), rho, psi))


def negativity(rho) -> np.ndarray:
    """Sum of magnitudes of the negative eigenvalues of ``rho^{T_A}``."""
    w = eigvalsh(partial_transpose(rho, "A"))
    return -np.sum(np.clip(w, None, 0.0), axis=-1)


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def dump_matrix(m) -> str:
    """Serialize a matrix as ``i,j,re,im`` lines in row-major order."""
    m = np.asarray(m, dtype=complex)
    lines = []
    for i in range(m.shape[0]):
        for j in range(m.shape[1]):
            z = m[i, j]
            lines.append(f"{i},{j},{format_float(z.real + 0.0)},{format_float(z.imag + 0.0)}")
    return "\n".join(lines) + "\n"
